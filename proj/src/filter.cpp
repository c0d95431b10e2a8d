#include "extra/filter.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <utility>

#include "extra/error.hpp"
#include "extra/text.hpp"

#ifndef EXTRA_DATA_DIR
#define EXTRA_DATA_DIR "data"
#endif

namespace extra {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && text::is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && text::is_space(s.back())) s.remove_suffix(1);
  return s;
}

PosTag parse_tags(std::string_view field, const std::string& file, std::size_t line) {
  PosTag tags = PosTag::none;
  while (!field.empty()) {
    std::size_t comma = field.find(',');
    std::string_view tag = trim(field.substr(0, comma));
    if (tag == "N") {
      tags = tags | PosTag::noun;
    } else if (tag == "ADJ") {
      tags = tags | PosTag::adjective;
    } else {
      throw ParseError(file, line, "unknown tag '" + std::string(tag) + "'");
    }
    if (comma == std::string_view::npos) break;
    field.remove_prefix(comma + 1);
  }
  return tags;
}

struct Suffix {
  std::string_view ending;
  std::string_view replacement;
};

// Regular inflection rules, tried in order.
constexpr std::array<Suffix, 8> kNounSuffixes = {{
    {"ies", "y"}, {"ses", "s"}, {"xes", "x"}, {"zes", "z"},
    {"ches", "ch"}, {"shes", "sh"}, {"men", "man"}, {"s", ""},
}};

constexpr std::array<Suffix, 6> kAdjectiveSuffixes = {{
    {"iest", "y"}, {"ier", "y"}, {"est", ""}, {"er", ""}, {"est", "e"}, {"er", "e"},
}};

// Function words whose endings look inflected ("has" is not the plural of
// "ha"); these never go through suffix stripping.
constexpr std::array<std::string_view, 22> kUninflected = {
    "as",     "is",      "us",       "was",     "has",     "does",    "this",    "thus",
    "yes",    "its",     "theirs",   "less",    "unless",  "always",  "perhaps", "across",
    "towards", "besides", "whereas", "sometimes", "afterwards", "nevertheless"};

}  // namespace

PosLexicon PosLexicon::load(const std::filesystem::path& lexicon_path,
                            const std::filesystem::path& pronoun_path) {
  PosLexicon lex;
  {
    std::ifstream in(lexicon_path);
    if (!in) throw DataError("cannot open lexicon " + lexicon_path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view view = trim(line);
      if (view.empty() || view.front() == '#') continue;
      std::size_t tab = view.find('\t');
      if (tab == std::string_view::npos) {
        throw ParseError(lexicon_path.string(), line_no, "expected word<TAB>tags");
      }
      lex.add(trim(view.substr(0, tab)),
              parse_tags(view.substr(tab + 1), lexicon_path.string(), line_no));
    }
  }
  {
    std::ifstream in(pronoun_path);
    if (!in) throw DataError("cannot open pronoun list " + pronoun_path.string());
    std::string line;
    while (std::getline(in, line)) {
      std::string_view view = trim(line);
      if (view.empty() || view.front() == '#') continue;
      lex.add_pronoun(view);
    }
  }
  return lex;
}

std::filesystem::path PosLexicon::bundled_dir() {
  if (const char* env = std::getenv("EXTRA_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return EXTRA_DATA_DIR;
}

PosLexicon PosLexicon::bundled() {
  auto dir = bundled_dir();
  return load(dir / "lexicon.tsv", dir / "pronouns.txt");
}

void PosLexicon::add(std::string_view word, PosTag tags) {
  std::string key = text::to_lower(word);
  if (pronouns_.contains(key)) return;
  auto& slot = tags_[std::move(key)];
  slot = slot | tags;
}

void PosLexicon::add_pronoun(std::string_view word) {
  std::string key = text::to_lower(word);
  tags_.erase(key);
  pronouns_.insert(std::move(key));
}

PosTag PosLexicon::lookup(std::string_view word) const {
  auto it = tags_.find(std::string(word));
  return it == tags_.end() ? PosTag::none : it->second;
}

bool PosLexicon::is_pronoun(std::string_view word) const {
  return pronouns_.contains(std::string(word));
}

PosTag LexiconTagger::tag(std::string_view token) const {
  if (lexicon_->is_pronoun(token)) return PosTag::none;
  PosTag direct = lexicon_->lookup(token);
  if (direct != PosTag::none) return direct;
  for (auto w : kUninflected) {
    if (token == w) return PosTag::none;
  }

  PosTag found = PosTag::none;
  auto try_rules = [&](auto const& rules, PosTag wanted) {
    for (const auto& rule : rules) {
      if (token.size() <= rule.ending.size() + 1 || !token.ends_with(rule.ending)) continue;
      std::string base(token.substr(0, token.size() - rule.ending.size()));
      base += rule.replacement;
      if (has_tag(lexicon_->lookup(base), wanted)) {
        found = found | wanted;
        return;
      }
      // bigger -> big, hottest -> hot
      if (wanted == PosTag::adjective && rule.replacement.empty() && base.size() >= 3 &&
          base[base.size() - 1] == base[base.size() - 2]) {
        base.pop_back();
        if (has_tag(lexicon_->lookup(base), wanted)) {
          found = found | wanted;
          return;
        }
      }
    }
  };
  try_rules(kNounSuffixes, PosTag::noun);
  try_rules(kAdjectiveSuffixes, PosTag::adjective);
  return found;
}

bool contains_personal_pronoun(std::string_view sentence, const PosLexicon& lexicon) {
  for (const auto& tok : text::tokenize(sentence)) {
    if (lexicon.is_pronoun(tok)) return true;
  }
  return false;
}

PosProfile pos_profile(std::string_view sentence, const PosTagger& tagger) {
  PosProfile p;
  for (const auto& tok : text::tokenize(sentence)) {
    PosTag t = tagger.tag(tok);
    if (has_tag(t, PosTag::noun)) ++p.nouns;
    if (has_tag(t, PosTag::adjective)) ++p.adjectives;
  }
  return p;
}

SentenceFilter::SentenceFilter(PosLexicon lexicon)
    : lexicon_(std::make_unique<PosLexicon>(std::move(lexicon))),
      tagger_(std::make_unique<LexiconTagger>(*lexicon_)) {}

SentenceFilter::SentenceFilter(PosLexicon lexicon, std::unique_ptr<PosTagger> tagger)
    : lexicon_(std::make_unique<PosLexicon>(std::move(lexicon))), tagger_(std::move(tagger)) {
  if (!tagger_) tagger_ = std::make_unique<LexiconTagger>(*lexicon_);
}

bool SentenceFilter::contains_personal_pronoun(std::string_view sentence) const {
  return extra::contains_personal_pronoun(sentence, *lexicon_);
}

PosProfile SentenceFilter::pos_profile(std::string_view sentence) const {
  return extra::pos_profile(sentence, *tagger_);
}

bool SentenceFilter::is_candidate(std::string_view sentence) const {
  if (contains_personal_pronoun(sentence)) return false;
  PosProfile p = pos_profile(sentence);
  return p.nouns >= 1 && p.adjectives >= 1;
}

}  // namespace extra

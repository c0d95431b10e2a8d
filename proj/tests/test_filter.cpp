#include <algorithm>
#include <fstream>

#include "doctest.h"
#include "extra/error.hpp"
#include "extra/filter.hpp"
#include "extra/text.hpp"

using namespace extra;

namespace {

const SentenceFilter& bundled_filter() {
  static const SentenceFilter filter(PosLexicon::load(
      std::string(EXTRA_BUNDLED_DATA_DIR) + "/lexicon.tsv",
      std::string(EXTRA_BUNDLED_DATA_DIR) + "/pronouns.txt"));
  return filter;
}

}  // namespace

TEST_CASE("bundled pronoun list covers the required forms") {
  const auto& lex = bundled_filter().lexicon();
  for (const char* p : {"i", "me", "my", "mine", "we", "us", "our", "ours", "you", "your", "yours",
                        "he", "him", "his", "she", "her", "hers"}) {
    CHECK_MESSAGE(lex.is_pronoun(p), p);
    CHECK(lex.lookup(p) == PosTag::none);
  }
}

TEST_CASE("contains_personal_pronoun matches whole tokens only") {
  const auto& f = bundled_filter();
  CHECK(f.contains_personal_pronoun("I loved this film"));
  CHECK(f.contains_personal_pronoun("Watched it with MY kids."));
  CHECK(f.contains_personal_pronoun("I'm impressed"));
  CHECK_FALSE(f.contains_personal_pronoun("Great location"));
  CHECK_FALSE(f.contains_personal_pronoun("Mythology is not a pronoun here"));
  CHECK_FALSE(f.contains_personal_pronoun("Theme music"));
}

TEST_CASE("pos_profile") {
  const auto& f = bundled_filter();
  auto room = f.pos_profile("The room was clean");
  CHECK(room.nouns >= 1);
  CHECK(room.adjectives >= 1);

  auto empty = f.pos_profile("");
  CHECK(empty.nouns == 0);
  CHECK(empty.adjectives == 0);

  // "quickly" is absent from the bundled lexicon, and no suffix rule maps it
  // to an entry.
  CHECK(f.lexicon().lookup("quickly") == PosTag::none);
  auto quickly = f.pos_profile("quickly");
  CHECK(quickly.nouns == 0);
  CHECK(quickly.adjectives == 0);
}

TEST_CASE("is_candidate") {
  const auto& f = bundled_filter();
  CHECK(f.is_candidate("The acting is superb"));
  CHECK(f.is_candidate("Great location"));
  CHECK(f.is_candidate("The staff were friendly and helpful"));
  CHECK(f.is_candidate("Prices are reasonable"));
  CHECK_FALSE(f.is_candidate("I loved it"));

  // "watch" is a noun, "repeatedly" is neither noun nor adjective.
  CHECK(has_tag(f.lexicon().lookup("watch"), PosTag::noun));
  CHECK(f.lexicon().lookup("repeatedly") == PosTag::none);
  auto p = f.pos_profile("Watch repeatedly");
  CHECK(p.adjectives == 0);
  CHECK_FALSE(f.is_candidate("Watch repeatedly"));
}

TEST_CASE("inflected forms reach their base entry") {
  PosLexicon lex;
  lex.add("room", PosTag::noun);
  lex.add("city", PosTag::noun);
  lex.add("big", PosTag::adjective);
  lex.add("nice", PosTag::adjective);
  lex.add("happy", PosTag::adjective);
  lex.add("ha", PosTag::noun);
  LexiconTagger tagger(lex);
  CHECK(tagger.tag("rooms") == PosTag::noun);
  CHECK(tagger.tag("cities") == PosTag::noun);
  CHECK(tagger.tag("bigger") == PosTag::adjective);
  CHECK(tagger.tag("nicest") == PosTag::adjective);
  CHECK(tagger.tag("happiest") == PosTag::adjective);
  CHECK(tagger.tag("has") == PosTag::none);
  CHECK(tagger.tag("s") == PosTag::none);
}

TEST_CASE("ambiguous words count toward both tallies") {
  PosLexicon lex;
  lex.add("good", PosTag::noun | PosTag::adjective);
  SentenceFilter f(std::move(lex));
  auto p = f.pos_profile("good");
  CHECK(p.nouns == 1);
  CHECK(p.adjectives == 1);
  CHECK(f.is_candidate("good"));
}

TEST_CASE("custom tagger can be plugged in") {
  struct EverythingIsBoth : PosTagger {
    PosTag tag(std::string_view) const override { return PosTag::noun | PosTag::adjective; }
  };
  PosLexicon lex;
  lex.add_pronoun("i");
  SentenceFilter f(std::move(lex), std::make_unique<EverythingIsBoth>());
  CHECK(f.is_candidate("anything"));
  CHECK_FALSE(f.is_candidate("i anything"));
}

TEST_CASE("verdicts are case-insensitive and definitional") {
  const auto& f = bundled_filter();
  const std::vector<std::string> fixture = {
      "The acting is superb", "I loved this film", "Great service", "Everything was delicious",
      "This place is awful", "The first time", "Don't waste your money", "quickly",
      "The place was clean and the food was good", "We loved the view", "Bad service",
      "The sound is okay", "A voice teacher and early music fan", "Watch repeatedly"};
  for (const auto& s : fixture) {
    const bool verdict = f.is_candidate(s);
    auto p = f.pos_profile(s);
    CHECK(verdict == (!f.contains_personal_pronoun(s) && p.nouns >= 1 && p.adjectives >= 1));
    std::string upper = s;
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    CHECK(f.is_candidate(upper) == verdict);
    CHECK(f.is_candidate(text::to_lower(s)) == verdict);
  }
}

TEST_CASE("lexicon loading errors") {
  const std::string dir = std::string(EXTRA_TEST_DATA_DIR);
  auto tmp = std::filesystem::temp_directory_path() / "extra_bad_lexicon.tsv";
  {
    std::ofstream out(tmp);
    out << "room\tN\nclean\tVERB\n";
  }
  try {
    PosLexicon::load(tmp, std::string(EXTRA_BUNDLED_DATA_DIR) + "/pronouns.txt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(PosLexicon::load("/nonexistent", "/nonexistent"), DataError);
  std::filesystem::remove(tmp);
}

TEST_CASE("pronouns never carry noun or adjective tags") {
  PosLexicon lex;
  lex.add("i", PosTag::noun);
  lex.add_pronoun("i");
  CHECK(lex.lookup("i") == PosTag::none);
  lex.add("i", PosTag::noun);
  CHECK(lex.lookup("i") == PosTag::none);
}

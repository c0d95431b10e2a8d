#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace extra {

enum class PosTag : std::uint8_t { none = 0, noun = 1, adjective = 2 };

constexpr PosTag operator|(PosTag a, PosTag b) {
  return static_cast<PosTag>(static_cast<std::uint8_t>(a) | static_cast<std::uint8_t>(b));
}
constexpr bool has_tag(PosTag set, PosTag t) {
  return (static_cast<std::uint8_t>(set) & static_cast<std::uint8_t>(t)) != 0;
}

/// Word lists backing the filter. Pronouns never carry noun/adjective tags.
class PosLexicon {
 public:
  PosLexicon() = default;

  /// `lexicon` holds `word<TAB>tags` lines with tags a comma list of N/ADJ;
  /// `pronouns` holds one word per line. Blank lines and `#` comments are
  /// ignored.
  static PosLexicon load(const std::filesystem::path& lexicon,
                         const std::filesystem::path& pronouns);

  /// Lexicon shipped in the repository's data/ directory.
  static PosLexicon bundled();
  static std::filesystem::path bundled_dir();

  void add(std::string_view word, PosTag tags);
  void add_pronoun(std::string_view word);

  /// Exact lookup of a lowercase form.
  PosTag lookup(std::string_view word) const;
  bool is_pronoun(std::string_view word) const;

  std::size_t size() const { return tags_.size(); }
  const std::unordered_set<std::string>& pronouns() const { return pronouns_; }

 private:
  std::unordered_map<std::string, PosTag> tags_;
  std::unordered_set<std::string> pronouns_;
};

/// Assigns a noun/adjective tag set to a lowercase token.
class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual PosTag tag(std::string_view token) const = 0;
};

/// Dictionary tagger. Unknown inflected forms fall back to their base form
/// by stripping regular plural (nouns) and comparative/superlative
/// (adjectives) suffixes.
class LexiconTagger final : public PosTagger {
 public:
  explicit LexiconTagger(const PosLexicon& lexicon) : lexicon_(&lexicon) {}
  PosTag tag(std::string_view token) const override;

 private:
  const PosLexicon* lexicon_;
};

struct PosProfile {
  int nouns = 0;
  int adjectives = 0;
};

bool contains_personal_pronoun(std::string_view sentence, const PosLexicon& lexicon);

/// Words tagged both noun and adjective count towards both tallies.
PosProfile pos_profile(std::string_view sentence, const PosTagger& tagger);

/// Keeps sentences that have no personal pronoun, at least one noun and at
/// least one adjective.
class SentenceFilter {
 public:
  explicit SentenceFilter(PosLexicon lexicon);
  SentenceFilter(PosLexicon lexicon, std::unique_ptr<PosTagger> tagger);

  bool contains_personal_pronoun(std::string_view sentence) const;
  PosProfile pos_profile(std::string_view sentence) const;
  bool is_candidate(std::string_view sentence) const;

  const PosLexicon& lexicon() const { return *lexicon_; }

 private:
  // Heap-held so the default tagger's pointer survives moves.
  std::unique_ptr<PosLexicon> lexicon_;
  std::unique_ptr<PosTagger> tagger_;
};

}  // namespace extra

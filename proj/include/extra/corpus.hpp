#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace extra {

using SentenceId = std::uint64_t;

/// One review as read from the normalized JSON-lines corpus.
struct RawRecord {
  std::string user_id;
  std::string item_id;
  int rating = 0;  // 1..5
  std::int64_t timestamp = 0;
  std::string review_text;
  std::optional<std::string> heading;
};

struct Sentence {
  SentenceId id = 0;
  std::size_t record_index = 0;
  std::string text;
};

struct IngestIssue {
  std::size_t line = 0;
  std::string message;
};

enum class OnMalformed { skip, abort };

struct ParseOptions {
  OnMalformed on_malformed = OnMalformed::skip;
  /// Called once per rejected line, in file order. Defaults to silence.
  std::function<void(const IngestIssue&)> on_issue;
  /// Name used in error messages.
  std::string source_name = "<input>";
};

struct ParseReport {
  std::vector<RawRecord> records;
  std::vector<IngestIssue> issues;
};

/// Parses JSON-lines records. Each non-blank line must be an object with
/// `user`, `item`, `rating`, `timestamp`, `text` and an optional `title`.
/// Throws ParseError on the first bad line when on_malformed == abort.
ParseReport parse_corpus(std::istream& in, const ParseOptions& options = {});

/// As parse_corpus, reading a plain or gzip-compressed file.
ParseReport read_corpus_file(const std::filesystem::path& path,
                             ParseOptions options = {});

/// Review text followed by the heading, separated by one space.
std::string concat_text(const RawRecord& record);

/// Rule-based splitter: a sentence ends at a run of `.`, `!` or `?` that is
/// followed by whitespace or end of text, unless the period closes a known
/// abbreviation or a single-letter initial. Whitespace is normalized, so
/// joining the result with single spaces reproduces the normalized input.
std::vector<std::string> split_sentences(std::string_view text);

/// Splits every record and numbers sentences with a global counter in input
/// order, starting at first_id.
std::vector<Sentence> extract_sentences(std::span<const RawRecord> records,
                                        SentenceId first_id = 0);

}  // namespace extra

#include "extra/corpus.hpp"

#include <zlib.h>

#include <array>
#include <cmath>
#include <istream>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "extra/error.hpp"
#include "extra/text.hpp"

namespace extra {

namespace {

using nlohmann::json;

std::string id_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field '") + key + "'");
  std::string value;
  if (it->is_string()) {
    value = it->get<std::string>();
  } else if (it->is_number_integer()) {
    value = std::to_string(it->get<std::int64_t>());
  } else {
    throw DataError(std::string("field '") + key + "' must be a string");
  }
  if (value.empty()) throw DataError(std::string("field '") + key + "' is empty");
  return value;
}

std::int64_t integer_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field '") + key + "'");
  if (it->is_number_integer()) return it->get<std::int64_t>();
  if (it->is_number_float()) {
    double v = it->get<double>();
    if (std::isfinite(v) && v == std::floor(v)) return static_cast<std::int64_t>(v);
  }
  throw DataError(std::string("field '") + key + "' must be an integer");
}

RawRecord parse_line(std::string_view line) {
  json obj = json::parse(line);
  if (!obj.is_object()) throw DataError("line is not a JSON object");

  RawRecord r;
  r.user_id = id_field(obj, "user");
  r.item_id = id_field(obj, "item");
  std::int64_t rating = integer_field(obj, "rating");
  if (rating < 1 || rating > 5) {
    throw DataError("rating " + std::to_string(rating) + " outside 1..5");
  }
  r.rating = static_cast<int>(rating);
  r.timestamp = integer_field(obj, "timestamp");

  auto text = obj.find("text");
  if (text == obj.end() || !text->is_string()) {
    throw DataError("missing string field 'text'");
  }
  r.review_text = text->get<std::string>();
  if (auto title = obj.find("title"); title != obj.end() && !title->is_null()) {
    if (!title->is_string()) throw DataError("field 'title' must be a string");
    r.heading = title->get<std::string>();
  }
  if (r.review_text.empty() && (!r.heading || r.heading->empty())) {
    throw DataError("record has neither text nor title");
  }
  return r;
}

bool blank(std::string_view line) {
  for (char c : line) {
    if (!text::is_space(c)) return false;
  }
  return true;
}

template <typename NextLine>
ParseReport parse_lines(NextLine&& next_line, const ParseOptions& options) {
  ParseReport report;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(line)) {
    ++line_no;
    if (blank(line)) continue;
    try {
      report.records.push_back(parse_line(line));
    } catch (const std::exception& e) {
      if (options.on_malformed == OnMalformed::abort) {
        throw ParseError(options.source_name, line_no, e.what());
      }
      IngestIssue issue{line_no, e.what()};
      if (options.on_issue) options.on_issue(issue);
      report.issues.push_back(std::move(issue));
    }
  }
  return report;
}

struct GzCloser {
  void operator()(gzFile f) const noexcept { gzclose(f); }
};

}  // namespace

ParseReport parse_corpus(std::istream& in, const ParseOptions& options) {
  return parse_lines(
      [&in](std::string& line) { return static_cast<bool>(std::getline(in, line)); },
      options);
}

ParseReport read_corpus_file(const std::filesystem::path& path, ParseOptions options) {
  if (options.source_name == "<input>") options.source_name = path.string();
  // gzread passes uncompressed files through unchanged.
  std::unique_ptr<gzFile_s, GzCloser> file(gzopen(path.c_str(), "rb"));
  if (!file) throw DataError("cannot open corpus file " + path.string());

  std::array<char, 1 << 16> buf{};
  auto next_line = [&](std::string& line) {
    line.clear();
    bool got_any = false;
    while (gzgets(file.get(), buf.data(), static_cast<int>(buf.size())) != nullptr) {
      got_any = true;
      std::string_view chunk(buf.data());
      if (!chunk.empty() && chunk.back() == '\n') {
        chunk.remove_suffix(1);
        line.append(chunk);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      }
      line.append(chunk);
    }
    int err = 0;
    const char* msg = gzerror(file.get(), &err);
    if (err != Z_OK && err != Z_STREAM_END) {
      throw DataError("read error in " + path.string() + ": " + msg);
    }
    return got_any;
  };
  return parse_lines(next_line, options);
}

std::string concat_text(const RawRecord& record) {
  if (!record.heading || record.heading->empty()) return record.review_text;
  if (record.review_text.empty()) return *record.heading;
  return record.review_text + " " + *record.heading;
}

namespace {

constexpr std::array<std::string_view, 23> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc", "e.g", "i.e",
    "vol", "approx", "inc", "ltd", "co", "mt", "ft", "min", "max", "dept", "fig"};

bool is_terminator(char c) noexcept { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) noexcept { return c == '"' || c == '\'' || c == ')' || c == ']'; }

// `word` is the whitespace-delimited chunk ending just before a single '.'.
bool guards_period(std::string_view word) {
  while (!word.empty() && (word.front() == '(' || word.front() == '"' || word.front() == '\'')) {
    word.remove_prefix(1);
  }
  if (word.size() == 1 && std::isalpha(static_cast<unsigned char>(word[0]))) return true;
  std::string lower = text::to_lower(word);
  for (auto abbr : kAbbreviations) {
    if (lower == abbr) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view raw) {
  const std::string s = text::normalize_whitespace(raw);
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_terminator(s[i])) {
      ++i;
      continue;
    }
    std::size_t run_begin = i;
    std::size_t end = i;
    while (end < s.size() && is_terminator(s[end])) ++end;
    while (end < s.size() && is_closer(s[end])) ++end;
    bool at_boundary = end == s.size() || s[end] == ' ';
    if (at_boundary && end - run_begin == 1 && s[run_begin] == '.') {
      std::size_t word_begin = s.rfind(' ', run_begin);
      word_begin = word_begin == std::string::npos ? 0 : word_begin + 1;
      if (word_begin < start) word_begin = start;
      if (guards_period(std::string_view(s).substr(word_begin, run_begin - word_begin))) {
        at_boundary = false;
      }
    }
    if (at_boundary) {
      out.emplace_back(s.substr(start, end - start));
      start = end + 1;  // skip the single separating space
    }
    i = end;
  }
  if (start < s.size()) out.emplace_back(s.substr(start));
  return out;
}

std::vector<Sentence> extract_sentences(std::span<const RawRecord> records,
                                        SentenceId first_id) {
  std::vector<Sentence> out;
  SentenceId next = first_id;
  for (std::size_t r = 0; r < records.size(); ++r) {
    for (auto& s : split_sentences(concat_text(records[r]))) {
      out.push_back(Sentence{next++, r, std::move(s)});
    }
  }
  return out;
}

}  // namespace extra

#include "extra/text.hpp"

#include <cctype>

namespace extra::text {

namespace {

bool is_punct(char c) noexcept {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    // Only ASCII letters are folded; UTF-8 continuation bytes pass through.
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && is_space(s[pos])) ++pos;
    std::size_t end = pos;
    while (end < s.size() && !is_space(s[end])) ++end;
    std::size_t b = pos, e = end;
    while (b < e && is_punct(s[b])) ++b;
    while (e > b && is_punct(s[e - 1])) --e;
    if (e > b) tokens.push_back(to_lower(s.substr(b, e - b)));
    pos = end;
  }
  return tokens;
}

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace extra::text

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace extra::text {

/// Splits on ASCII whitespace, strips leading/trailing punctuation from each
/// token and lowercases it. Tokens that are pure punctuation are dropped.
/// Shared by the sentence filter and the shingler so both see the same words.
std::vector<std::string> tokenize(std::string_view s);

/// Collapses runs of whitespace to a single space and trims both ends.
std::string normalize_whitespace(std::string_view s);

std::string to_lower(std::string_view s);

bool is_space(char c) noexcept;

}  // namespace extra::text

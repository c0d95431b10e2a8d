#include "doctest.h"
#include "extra/text.hpp"

using extra::text::normalize_whitespace;
using extra::text::tokenize;

TEST_CASE("tokenize lowercases and strips edge punctuation") {
  CHECK(tokenize("The Room, was CLEAN!") ==
        std::vector<std::string>{"the", "room", "was", "clean"});
  CHECK(tokenize("  \"Don't\"  waste...  ") == std::vector<std::string>{"don't", "waste"});
  CHECK(tokenize("B-movie") == std::vector<std::string>{"b-movie"});
  CHECK(tokenize("--- !!! ...").empty());
  CHECK(tokenize("").empty());
}

TEST_CASE("normalize_whitespace collapses and trims") {
  CHECK(normalize_whitespace("  a \t b\n\nc  ") == "a b c");
  CHECK(normalize_whitespace("") == "");
  CHECK(normalize_whitespace(" \n ") == "");
}

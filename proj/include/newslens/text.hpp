#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace newslens::text {

/// Decodes UTF-8 into Unicode scalar values. Ill-formed sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view scalars);

/// Number of Unicode scalar values in a UTF-8 string.
std::size_t scalar_length(std::string_view bytes);

bool is_space(char32_t c);
bool is_punctuation(char32_t c);

/// Simple one-to-one lowercase mapping for Latin, Greek and Cyrillic letters.
char32_t to_lower(char32_t c);

/// Lowercases, splits on Unicode whitespace and strips punctuation from both
/// token edges. Tokens that become empty are dropped.
std::vector<std::string> tokenize(std::string_view utf8);

}  // namespace newslens::text

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coexpand::text {

// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD, one per byte.
std::u32string decode_utf8(std::string_view s);
void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(std::u32string_view s);

bool is_space(char32_t cp);
// Letters and digits for the word-boundary rule.
bool is_word_char(char32_t cp);
// Simple one-to-one lowercase mapping; never changes the code point count.
char32_t fold_case(char32_t cp);

// Lowercased, whitespace runs collapsed to one space, trimmed. nullopt when
// nothing is left after trimming.
std::optional<std::string> canonicalize(std::string_view surface);

std::string_view trim(std::string_view s);

}  // namespace coexpand::text

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mim {

// A token character is an ASCII letter, digit, or apostrophe. Everything
// else (including hyphens) separates tokens. This one rule is shared by the
// corpus tokenizer, the reword matcher, and the sentinel diff so that "word
// boundary" means the same thing everywhere.
inline bool is_token_char(char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '\'';
}

inline bool is_space_char(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_ascii_upper(char c) noexcept { return c >= 'A' && c <= 'Z'; }
inline bool is_ascii_lower(char c) noexcept { return c >= 'a' && c <= 'z'; }

inline char ascii_lower(char c) noexcept {
    return is_ascii_upper(c) ? static_cast<char>(c - 'A' + 'a') : c;
}
inline char ascii_upper(char c) noexcept {
    return is_ascii_lower(c) ? static_cast<char>(c - 'a' + 'A') : c;
}

std::string to_lower_ascii(std::string_view s);
bool iequals_ascii(std::string_view a, std::string_view b);

std::string trim(std::string_view s);

// [begin, end) byte range of one token within the text it was cut from.
struct TokenSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

std::vector<TokenSpan> token_spans(std::string_view text);

// Lowercased token texts, in order. No stopword filtering.
std::vector<std::string> split_tokens_lower(std::string_view text);

// Whitespace-normalized copy of a string: every whitespace run collapses to
// a single space. source_range[i] is the byte range of the source text that
// produced normalized byte i, so matches found in the normalized view can be
// mapped back to exact source offsets.
struct NormalizedText {
    std::string text;
    std::vector<std::pair<std::size_t, std::size_t>> source_range;
};

NormalizedText normalize_whitespace(std::string_view s);

// Trimmed, inner whitespace runs collapsed to single spaces.
std::string collapse_whitespace(std::string_view s);

}  // namespace mim

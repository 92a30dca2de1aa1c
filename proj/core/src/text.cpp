#include "mim/text.hpp"

namespace mim {

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = ascii_lower(c);
    return out;
}

bool iequals_ascii(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
    }
    return true;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space_char(s[b])) ++b;
    while (e > b && is_space_char(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<TokenSpan> token_spans(std::string_view text) {
    std::vector<TokenSpan> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_token_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t b = i;
        while (i < text.size() && is_token_char(text[i])) ++i;
        out.push_back({b, i});
    }
    return out;
}

std::vector<std::string> split_tokens_lower(std::string_view text) {
    std::vector<std::string> out;
    for (const TokenSpan& t : token_spans(text)) {
        out.push_back(to_lower_ascii(text.substr(t.begin, t.end - t.begin)));
    }
    return out;
}

NormalizedText normalize_whitespace(std::string_view s) {
    NormalizedText out;
    out.text.reserve(s.size());
    out.source_range.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (is_space_char(s[i])) {
            std::size_t b = i;
            while (i < s.size() && is_space_char(s[i])) ++i;
            out.text.push_back(' ');
            out.source_range.emplace_back(b, i);
        } else {
            out.text.push_back(s[i]);
            out.source_range.emplace_back(i, i + 1);
            ++i;
        }
    }
    return out;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space_char(c)) {
            if (!out.empty()) pending_space = true;
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace mim

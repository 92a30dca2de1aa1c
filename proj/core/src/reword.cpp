#include "mim/reword.hpp"

#include <limits>

#include "mim/errors.hpp"
#include "mim/text.hpp"

namespace mim {

namespace {

bool is_word_start(const std::string& norm, std::size_t i) {
    return is_token_char(norm[i]) && (i == 0 || !is_token_char(norm[i - 1]));
}

// Case-insensitive match of a collapsed phrase at normalized position i,
// requiring a word boundary after the match.
bool match_at(const std::string& norm, std::size_t i, std::string_view phrase) {
    if (phrase.empty() || i + phrase.size() > norm.size()) return false;
    for (std::size_t j = 0; j < phrase.size(); ++j) {
        if (ascii_lower(norm[i + j]) != ascii_lower(phrase[j])) return false;
    }
    const std::size_t end = i + phrase.size();
    return end == norm.size() || !is_token_char(norm[end]);
}

bool contains_phrase_norm(const std::string& norm, std::string_view collapsed_phrase) {
    for (std::size_t i = 0; i < norm.size(); ++i) {
        if (is_word_start(norm, i) && match_at(norm, i, collapsed_phrase)) return true;
    }
    return false;
}

}  // namespace

bool contains_phrase(std::string_view text, std::string_view phrase) {
    return contains_phrase_norm(normalize_whitespace(text).text, collapse_whitespace(phrase));
}

RewordResult reword(std::string_view text, const ValenceLexicon& lexicon) {
    const NormalizedText norm = normalize_whitespace(text);

    for (const std::string& phrase : lexicon.suppress) {
        if (contains_phrase_norm(norm.text, collapse_whitespace(phrase))) {
            RewordResult result;
            result.suppressed = true;
            return result;
        }
    }

    if (!lexicon.scope.require_any.empty()) {
        bool in_scope = false;
        for (const std::string& phrase : lexicon.scope.require_any) {
            if (contains_phrase_norm(norm.text, collapse_whitespace(phrase))) {
                in_scope = true;
                break;
            }
        }
        if (!in_scope) {
            RewordResult result;
            result.output = std::string(text);
            return result;
        }
    }

    std::vector<std::string> sources;
    sources.reserve(lexicon.pairs.size());
    for (const ValencePair& p : lexicon.pairs) sources.push_back(collapse_whitespace(p.source));

    RewordResult result;
    std::size_t i = 0;
    while (i < norm.text.size()) {
        if (!is_word_start(norm.text, i)) {
            ++i;
            continue;
        }
        std::size_t best_len = 0;
        std::size_t best_pair = std::numeric_limits<std::size_t>::max();
        for (std::size_t pi = 0; pi < sources.size(); ++pi) {
            // Strict > keeps the earliest pair on equal source lengths.
            if (sources[pi].size() > best_len && match_at(norm.text, i, sources[pi])) {
                best_len = sources[pi].size();
                best_pair = pi;
            }
        }
        if (best_pair == std::numeric_limits<std::size_t>::max()) {
            while (i < norm.text.size() && is_token_char(norm.text[i])) ++i;
            continue;
        }

        const std::size_t o_begin = norm.source_range[i].first;
        const std::size_t o_end = norm.source_range[i + best_len - 1].second;
        Substitution sub;
        sub.start = o_begin;
        sub.end = o_end;
        sub.source = std::string(text.substr(o_begin, o_end - o_begin));
        sub.replacement = lexicon.pairs[best_pair].replacement;
        sub.pair_index = best_pair;
        if (is_ascii_upper(sub.source.front()) && is_ascii_lower(sub.replacement.front())) {
            sub.replacement.front() = ascii_upper(sub.replacement.front());
        }
        result.substitutions.push_back(std::move(sub));
        i += best_len;  // replaced text is never rescanned
    }

    result.output = apply_log(text, result.substitutions);
    return result;
}

std::string apply_log(std::string_view original, const std::vector<Substitution>& substitutions) {
    std::size_t cursor = 0;
    std::string out;
    out.reserve(original.size());
    for (const Substitution& sub : substitutions) {
        if (sub.start >= sub.end || sub.end > original.size()) {
            throw ValidationError("substitution span out of range: [" +
                                  std::to_string(sub.start) + ", " + std::to_string(sub.end) +
                                  ")");
        }
        if (sub.start < cursor) {
            throw ValidationError("substitution spans overlap or are out of order at offset " +
                                  std::to_string(sub.start));
        }
        if (original.substr(sub.start, sub.end - sub.start) != sub.source) {
            throw ValidationError("substitution source does not match original text at offset " +
                                  std::to_string(sub.start));
        }
        out.append(original.substr(cursor, sub.start - cursor));
        out.append(sub.replacement);
        cursor = sub.end;
    }
    out.append(original.substr(cursor));
    return out;
}

}  // namespace mim

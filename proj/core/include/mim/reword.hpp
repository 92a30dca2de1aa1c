#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mim/lexicon.hpp"

namespace mim {

// One applied replacement. Offsets index the original text; source is the
// exact original slice, replacement the text emitted in its place.
struct Substitution {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string source;
    std::string replacement;
    std::size_t pair_index = 0;

    bool operator==(const Substitution&) const = default;
};

struct RewordResult {
    std::string output;
    std::vector<Substitution> substitutions;  // ordered by start, non-overlapping
    bool suppressed = false;
};

// The substitution engine. Behavior, in order:
//   1. If any suppress phrase occurs in the text (case-insensitive, word
//      boundaries), the item is suppressed: empty output, no substitutions.
//   2. If scope.require_any is non-empty and none of its phrases occur,
//      the text passes through unchanged.
//   3. Otherwise a single left-to-right pass replaces phrases: matching is
//      case-insensitive on word boundaries against the whitespace-normalized
//      text, leftmost match wins, the longest source at a position wins,
//      earlier lexicon pairs break length ties, and replaced text is never
//      rescanned. A match whose first letter is uppercase uppercases the
//      first letter of its replacement.
// Original spacing survives outside the replaced spans.
RewordResult reword(std::string_view text, const ValenceLexicon& lexicon);

// Replays a substitution log against the original text. Throws
// ValidationError on out-of-range, overlapping, or mismatched spans.
std::string apply_log(std::string_view original, const std::vector<Substitution>& substitutions);

// Case-insensitive word-boundary phrase containment; whitespace in both the
// text and the phrase is normalized before matching.
bool contains_phrase(std::string_view text, std::string_view phrase);

}  // namespace mim

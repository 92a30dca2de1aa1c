#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace mim {

// One valence rewording: a literal source phrase and the phrase that
// replaces it. Surface forms only; no morphology.
struct ValencePair {
    std::string source;       // 1..8 tokens, matched case-insensitively
    std::string replacement;
    std::string intent;       // free-text annotation, e.g. "lenient"

    bool operator==(const ValencePair&) const = default;
};

struct LexiconScope {
    // When non-empty, an item is eligible for rewording only if its headline
    // contains one of these phrases.
    std::vector<std::string> require_any;

    bool operator==(const LexiconScope&) const = default;
};

// The full cover-story plan: ordered pairs (file order is match priority),
// suppression phrases (an item whose headline contains one is dropped), and
// an optional scope filter.
struct ValenceLexicon {
    std::vector<ValencePair> pairs;
    std::vector<std::string> suppress;
    LexiconScope scope;

    bool operator==(const ValenceLexicon&) const = default;
};

struct LexiconReport {
    bool non_reentrant = true;
    // (a, b): pairs[a].replacement contains pairs[b].source as a contiguous
    // token subsequence, so rewording output could feed pair b again.
    std::vector<std::pair<std::size_t, std::size_t>> overlaps;
};

// The three operational pairs of the user study, also shipped as
// data/study_osha.lexicon.json.
ValenceLexicon study_lexicon();

ValenceLexicon load_lexicon(const std::filesystem::path& path);
ValenceLexicon lexicon_from_json(const nlohmann::json& j);
nlohmann::ordered_json lexicon_to_json(const ValenceLexicon& lex);

// Enforces the structural invariants (non-empty trimmed phrases, source
// length 1..8 tokens, source != replacement, unique sources). Throws
// ValidationError naming the offending phrase.
void check_lexicon(const ValenceLexicon& lex);

LexiconReport validate_lexicon(const ValenceLexicon& lex);

}  // namespace mim

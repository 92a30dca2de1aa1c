#include "mim/lexicon.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "mim/errors.hpp"
#include "mim/text.hpp"

namespace mim {

namespace {

bool contains_contiguous(const std::vector<std::string>& haystack,
                         const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool all = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (haystack[i + j] != needle[j]) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

}  // namespace

ValenceLexicon study_lexicon() {
    ValenceLexicon lex;
    lex.pairs = {
        {"faces major retribution of", "gets off easy with retribution of", "lenient"},
        {"fines", "gives a slap on the wrist to", "lenient"},
        {"punishes", "penalizes", "lenient"},
    };
    return lex;
}

ValenceLexicon lexicon_from_json(const nlohmann::json& j) {
    ValenceLexicon lex;
    try {
        for (const auto& p : j.value("pairs", nlohmann::json::array())) {
            ValencePair pair;
            pair.source = p.at("source").get<std::string>();
            pair.replacement = p.at("replacement").get<std::string>();
            pair.intent = p.value("intent", std::string{});
            lex.pairs.push_back(std::move(pair));
        }
        lex.suppress = j.value("suppress", std::vector<std::string>{});
        if (j.contains("scope")) {
            lex.scope.require_any =
                j.at("scope").value("require_any", std::vector<std::string>{});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad lexicon document: ") + e.what());
    }
    check_lexicon(lex);
    return lex;
}

ValenceLexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read lexicon file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.byte, "lexicon file is not valid JSON: " + std::string(e.what()));
    }
    return lexicon_from_json(j);
}

nlohmann::ordered_json lexicon_to_json(const ValenceLexicon& lex) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const ValencePair& p : lex.pairs) {
        pairs.push_back({{"source", p.source},
                         {"replacement", p.replacement},
                         {"intent", p.intent}});
    }
    j["pairs"] = std::move(pairs);
    j["suppress"] = lex.suppress;
    j["scope"] = {{"require_any", lex.scope.require_any}};
    return j;
}

void check_lexicon(const ValenceLexicon& lex) {
    std::unordered_set<std::string> sources;
    for (const ValencePair& p : lex.pairs) {
        if (p.source.empty() || p.replacement.empty()) {
            throw ValidationError("lexicon pair with empty source or replacement");
        }
        if (trim(p.source) != p.source || trim(p.replacement) != p.replacement) {
            throw ValidationError("lexicon phrase has leading or trailing whitespace: \"" +
                                  (trim(p.source) != p.source ? p.source : p.replacement) +
                                  "\"");
        }
        const std::size_t source_tokens = split_tokens_lower(p.source).size();
        if (source_tokens < 1 || source_tokens > 8) {
            throw ValidationError("lexicon source must be 1..8 tokens: \"" + p.source + "\"");
        }
        if (iequals_ascii(p.source, p.replacement)) {
            throw ValidationError("lexicon pair replaces a phrase with itself: \"" +
                                  p.source + "\"");
        }
        if (!sources.insert(to_lower_ascii(p.source)).second) {
            throw ValidationError("duplicate lexicon source: \"" + p.source + "\"");
        }
    }
    for (const std::string& s : lex.suppress) {
        if (trim(s).empty()) throw ValidationError("empty suppression phrase");
    }
    for (const std::string& s : lex.scope.require_any) {
        if (trim(s).empty()) throw ValidationError("empty scope phrase");
    }
}

LexiconReport validate_lexicon(const ValenceLexicon& lex) {
    LexiconReport report;
    std::vector<std::vector<std::string>> source_tokens, replacement_tokens;
    source_tokens.reserve(lex.pairs.size());
    replacement_tokens.reserve(lex.pairs.size());
    for (const ValencePair& p : lex.pairs) {
        source_tokens.push_back(split_tokens_lower(p.source));
        replacement_tokens.push_back(split_tokens_lower(p.replacement));
    }
    for (std::size_t a = 0; a < lex.pairs.size(); ++a) {
        for (std::size_t b = 0; b < lex.pairs.size(); ++b) {
            if (contains_contiguous(replacement_tokens[a], source_tokens[b])) {
                report.overlaps.emplace_back(a, b);
            }
        }
    }
    report.non_reentrant = report.overlaps.empty();
    return report;
}

}  // namespace mim

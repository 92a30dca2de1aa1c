#include "mim/corpus.hpp"

namespace mim {

namespace {

// The bundled general English stopword list, frozen so that token streams,
// TF-IDF weights and cluster profiles are reproducible across runs. README
// section "Stopword policy" mirrors this list.
constexpr std::string_view kGeneral[] = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an",
    "and", "any", "are", "aren't", "as", "at", "be", "because", "been",
    "before", "being", "below", "between", "both", "but", "by", "can",
    "can't", "cannot", "could", "couldn't", "did", "didn't", "do", "does",
    "doesn't", "doing", "don't", "down", "during", "each", "few", "for",
    "from", "further", "had", "hadn't", "has", "hasn't", "have", "haven't",
    "having", "he", "he'd", "he'll", "he's", "her", "here", "here's", "hers",
    "herself", "him", "himself", "his", "how", "how's", "i", "i'd", "i'll",
    "i'm", "i've", "if", "in", "into", "is", "isn't", "it", "it's", "its",
    "itself", "let's", "me", "more", "most", "mustn't", "my", "myself", "no",
    "nor", "not", "of", "off", "on", "once", "only", "or", "other", "ought",
    "our", "ours", "ourselves", "out", "over", "own", "s", "same", "shan't",
    "she", "she'd", "she'll", "she's", "should", "shouldn't", "so", "some",
    "such", "t", "than", "that", "that's", "the", "their", "theirs", "them",
    "themselves", "then", "there", "there's", "these", "they", "they'd",
    "they'll", "they're", "they've", "this", "those", "through", "to", "too",
    "u", "under", "until", "up", "very", "was", "wasn't", "we", "we'd",
    "we'll", "we're", "we've", "were", "weren't", "what", "what's", "when",
    "when's", "where", "where's", "which", "while", "who", "who's", "whom",
    "why", "why's", "will", "with", "won't", "would", "wouldn't", "you",
    "you'd", "you'll", "you're", "you've", "your", "yours", "yourself",
    "yourselves",
};

// Words that appear in essentially every release of this corpus.
constexpr std::string_view kDomain[] = {
    "osha", "occupational", "safety", "health", "administration",
};

// Whitespace-delimited tokens (matched case-insensitively) after which a
// period never ends a sentence.
constexpr std::string_view kAbbreviations[] = {
    "u.s.", "u.s.a.", "inc.", "corp.", "co.", "ltd.", "llc.", "l.l.c.",
    "no.", "nos.", "mr.", "mrs.", "ms.", "dr.", "jr.", "sr.", "st.", "vs.",
    "v.", "etc.", "approx.", "dept.", "div.", "ave.", "blvd.", "rd.",
};

}  // namespace

std::span<const std::string_view> general_stopwords() { return kGeneral; }
std::span<const std::string_view> domain_stopwords() { return kDomain; }
std::span<const std::string_view> sentence_abbreviations() { return kAbbreviations; }

StopwordPolicy StopwordPolicy::bundled() {
    StopwordPolicy p;
    for (std::string_view w : kGeneral) p.general.emplace(w);
    for (std::string_view w : kDomain) p.domain.emplace(w);
    return p;
}

}  // namespace mim

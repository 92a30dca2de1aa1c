#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "mim/corpus.hpp"

namespace mim {

struct SparseEntry {
    std::uint32_t col = 0;
    double weight = 0.0;
};

// Sorted by column; one per sentence.
using SparseVector = std::vector<SparseEntry>;

// TF-IDF weights over a sentence corpus. Rows are L2-normalized; a sentence
// whose every token was a stopword keeps an all-zero (empty) row.
struct TermMatrix {
    std::vector<std::string> vocabulary;  // column order: lexicographic
    std::unordered_map<std::string, std::uint32_t> term_to_col;
    std::vector<SparseVector> rows;
    std::size_t doc_count = 0;            // N = number of sentences
    std::vector<std::size_t> doc_freq;    // df per column
};

// idf(t) = ln((1 + N) / (1 + df(t))) + 1  (smoothed variant, frozen here so
// every exported weight is reproducible).
double tfidf_idf(std::size_t doc_count, std::size_t doc_freq);

// weight(t, d) = tf(t, d) * idf(t) with tf the raw in-sentence count, then
// each row is L2-normalized.
TermMatrix build_tfidf(const std::vector<SentenceRecord>& corpus);

}  // namespace mim

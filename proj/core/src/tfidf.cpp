#include "mim/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mim/errors.hpp"

namespace mim {

double tfidf_idf(std::size_t doc_count, std::size_t doc_freq) {
    return std::log((1.0 + static_cast<double>(doc_count)) /
                    (1.0 + static_cast<double>(doc_freq))) +
           1.0;
}

TermMatrix build_tfidf(const std::vector<SentenceRecord>& corpus) {
    if (corpus.empty()) throw ValidationError("cannot build TF-IDF over an empty corpus");

    // std::map keeps the vocabulary lexicographic, which fixes column order.
    std::map<std::string, std::size_t> df;
    for (const SentenceRecord& s : corpus) {
        std::unordered_map<std::string, bool> seen;
        for (const std::string& t : s.tokens) {
            if (!seen.emplace(t, true).second) continue;
            ++df[t];
        }
    }
    if (df.empty()) {
        throw ValidationError("cannot build TF-IDF: no sentence has any token");
    }

    TermMatrix m;
    m.doc_count = corpus.size();
    m.vocabulary.reserve(df.size());
    m.doc_freq.reserve(df.size());
    for (const auto& [term, count] : df) {
        m.term_to_col.emplace(term, static_cast<std::uint32_t>(m.vocabulary.size()));
        m.vocabulary.push_back(term);
        m.doc_freq.push_back(count);
    }

    m.rows.reserve(corpus.size());
    for (const SentenceRecord& s : corpus) {
        std::map<std::uint32_t, std::size_t> counts;
        for (const std::string& t : s.tokens) ++counts[m.term_to_col.at(t)];

        SparseVector row;
        row.reserve(counts.size());
        double sq_norm = 0.0;
        for (const auto& [col, tf] : counts) {
            const double w = static_cast<double>(tf) * tfidf_idf(m.doc_count, m.doc_freq[col]);
            row.push_back({col, w});
            sq_norm += w * w;
        }
        if (sq_norm > 0.0) {
            const double inv = 1.0 / std::sqrt(sq_norm);
            for (SparseEntry& e : row) e.weight *= inv;
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

}  // namespace mim

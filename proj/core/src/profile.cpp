#include "mim/profile.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "mim/errors.hpp"

namespace mim {

std::vector<ClusterProfile> profile_clusters(const TermMatrix& matrix,
                                             const ClusterModel& model,
                                             const std::vector<SentenceRecord>& corpus,
                                             std::size_t top_n) {
    if (model.assignment.size() != matrix.rows.size() ||
        matrix.rows.size() != corpus.size()) {
        throw ValidationError("model, matrix and corpus disagree on row count");
    }

    const std::size_t k = model.centroids.size();
    std::vector<ClusterProfile> profiles(k);
    std::vector<std::map<std::string, double>> weights(k);
    std::vector<std::unordered_set<std::string>> uniques(k);

    for (std::size_t p = 0; p < corpus.size(); ++p) {
        const std::uint32_t c = model.assignment[p];
        ClusterProfile& prof = profiles[c];
        ++prof.size;
        for (const std::string& tok : corpus[p].tokens) {
            ++prof.total_tokens;
            uniques[c].insert(tok);
        }
        for (const SparseEntry& e : matrix.rows[p]) {
            weights[c][matrix.vocabulary[e.col]] += e.weight;
        }
    }

    for (std::uint32_t c = 0; c < k; ++c) {
        ClusterProfile& prof = profiles[c];
        prof.cluster_id = c;
        prof.unique_tokens = uniques[c].size();
        // A cluster with no surviving tokens counts as fully diverse.
        prof.lexical_diversity =
            prof.total_tokens == 0
                ? 1.0
                : static_cast<double>(prof.unique_tokens) /
                      static_cast<double>(prof.total_tokens);

        prof.top_terms.assign(weights[c].begin(), weights[c].end());
        std::stable_sort(prof.top_terms.begin(), prof.top_terms.end(),
                         [](const auto& a, const auto& b) {
                             if (a.second != b.second) return a.second > b.second;
                             return a.first < b.first;
                         });
        if (prof.top_terms.size() > top_n) prof.top_terms.resize(top_n);
    }
    return profiles;
}

std::vector<std::uint32_t> rank_regulatory_clusters(
    const std::vector<ClusterProfile>& profiles) {
    if (profiles.empty()) throw ValidationError("no cluster profiles to rank");
    std::vector<std::uint32_t> order(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) order[i] = profiles[i].cluster_id;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const ClusterProfile& pa = profiles[a];
        const ClusterProfile& pb = profiles[b];
        if (pa.lexical_diversity != pb.lexical_diversity) {
            return pa.lexical_diversity < pb.lexical_diversity;
        }
        if (pa.size != pb.size) return pa.size > pb.size;
        return a < b;
    });
    return order;
}

std::vector<std::pair<std::string, double>> surface_candidate_terms(
    const std::vector<ClusterProfile>& profiles, const std::vector<std::uint32_t>& chosen,
    std::size_t n) {
    std::map<std::string, double> merged;
    for (std::uint32_t id : chosen) {
        const auto it = std::find_if(profiles.begin(), profiles.end(),
                                     [id](const ClusterProfile& p) { return p.cluster_id == id; });
        if (it == profiles.end()) {
            throw ValidationError("unknown cluster id: " + std::to_string(id));
        }
        for (const auto& [term, weight] : it->top_terms) {
            auto [pos, inserted] = merged.emplace(term, weight);
            if (!inserted) pos->second = std::max(pos->second, weight);
        }
    }
    std::vector<std::pair<std::string, double>> out(merged.begin(), merged.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (out.size() > n) out.resize(n);
    return out;
}

nlohmann::ordered_json profiles_to_json(const std::vector<ClusterProfile>& profiles) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ClusterProfile& p : profiles) {
        nlohmann::ordered_json j;
        j["cluster_id"] = p.cluster_id;
        j["size"] = p.size;
        j["lexical_diversity"] = p.lexical_diversity;
        j["unique_tokens"] = p.unique_tokens;
        j["total_tokens"] = p.total_tokens;
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const auto& [term, weight] : p.top_terms) {
            terms.push_back({{"term", term}, {"weight", weight}});
        }
        j["top_terms"] = std::move(terms);
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string render_profile_table(const std::vector<ClusterProfile>& profiles,
                                 std::size_t terms_per_cluster) {
    std::ostringstream os;
    os << "cluster  size  diversity  top terms\n";
    os << "-------  ----  ---------  ---------\n";
    for (const ClusterProfile& p : profiles) {
        char head[64];
        std::snprintf(head, sizeof(head), "%7u  %4zu  %9.4f  ", p.cluster_id, p.size,
                      p.lexical_diversity);
        os << head;
        for (std::size_t i = 0; i < p.top_terms.size() && i < terms_per_cluster; ++i) {
            if (i) os << ", ";
            os << p.top_terms[i].first;
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace mim

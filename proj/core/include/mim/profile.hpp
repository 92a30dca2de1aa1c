#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mim/kmeans.hpp"

namespace mim {

// Per-cluster evidence for the analyst: how big, how repetitive, and which
// terms carry the weight.
struct ClusterProfile {
    std::uint32_t cluster_id = 0;
    std::size_t size = 0;  // member sentences
    double lexical_diversity = 1.0;
    std::size_t unique_tokens = 0;
    std::size_t total_tokens = 0;
    // Aggregate TF-IDF weight per term, weight-descending, ties by term.
    std::vector<std::pair<std::string, double>> top_terms;
};

std::vector<ClusterProfile> profile_clusters(const TermMatrix& matrix,
                                             const ClusterModel& model,
                                             const std::vector<SentenceRecord>& corpus,
                                             std::size_t top_n = 100);

// Cluster ids ordered by ascending lexical diversity (most repetitive, i.e.
// most regulatory, first); ties go to the larger cluster, then the lower id.
std::vector<std::uint32_t> rank_regulatory_clusters(const std::vector<ClusterProfile>& profiles);

// Merged top terms of the chosen clusters, de-duplicated keeping the max
// weight, truncated to n. Advisory input to manual lexicon authorship.
std::vector<std::pair<std::string, double>> surface_candidate_terms(
    const std::vector<ClusterProfile>& profiles, const std::vector<std::uint32_t>& chosen,
    std::size_t n);

nlohmann::ordered_json profiles_to_json(const std::vector<ClusterProfile>& profiles);
std::string render_profile_table(const std::vector<ClusterProfile>& profiles,
                                 std::size_t terms_per_cluster = 8);

}  // namespace mim

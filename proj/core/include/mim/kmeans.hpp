#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mim/tfidf.hpp"

namespace mim {

struct ClusterConfig {
    std::uint32_t k = 10;
    std::uint64_t seed = 0;
    std::uint32_t max_iter = 300;
    double tol = 1e-9;  // centroid-shift stopping threshold
};

struct ClusterModel {
    ClusterConfig config;
    std::size_t dim = 0;
    std::vector<std::vector<double>> centroids;  // k x dim
    std::vector<std::uint32_t> assignment;       // row -> cluster id
    double inertia = 0.0;                        // sum of squared distances
    std::uint32_t iterations = 0;
    bool converged = false;
    // Objective after each Lloyd update, for the monotonicity property.
    std::vector<double> iteration_inertia;
};

// Lloyd's algorithm from k-means++ seeding, driven entirely by cfg.seed.
// Stops when the assignment is stable, the max centroid shift drops below
// cfg.tol, or cfg.max_iter is reached. An emptied cluster is repaired by
// moving in the point farthest from its current centroid.
ClusterModel fit_kmeans(const std::vector<SparseVector>& rows, std::size_t dim,
                        const ClusterConfig& cfg);
ClusterModel fit_kmeans(const TermMatrix& matrix, const ClusterConfig& cfg);

double squared_distance(const SparseVector& row, const std::vector<double>& centroid);

// Model file schema: {config, vocabulary, centroids, assignment, inertia}.
nlohmann::ordered_json model_to_json(const ClusterModel& model,
                                     const std::vector<std::string>& vocabulary);
ClusterModel model_from_json(const nlohmann::json& j, std::vector<std::string>* vocabulary);

}  // namespace mim

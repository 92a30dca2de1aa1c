#include "mim/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mim/errors.hpp"

namespace mim {

namespace {

// Deterministic uniform double in [0, 1) built from raw mt19937_64 output;
// avoids the implementation-defined std::uniform_real_distribution.
double next_u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sparse_sq_dist(const SparseVector& a, const SparseVector& b) {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
            s += a[i].weight * a[i].weight;
            ++i;
        } else if (i == a.size() || b[j].col < a[i].col) {
            s += b[j].weight * b[j].weight;
            ++j;
        } else {
            const double d = a[i].weight - b[j].weight;
            s += d * d;
            ++i;
            ++j;
        }
    }
    return s;
}

double dot(const SparseVector& row, const std::vector<double>& centroid) {
    double s = 0.0;
    for (const SparseEntry& e : row) s += e.weight * centroid[e.col];
    return s;
}

std::vector<std::size_t> seed_kmeanspp(const std::vector<SparseVector>& rows,
                                       std::uint32_t k, std::mt19937_64& rng) {
    const std::size_t n = rows.size();
    std::vector<std::size_t> seeds;
    std::vector<bool> chosen(n, false);

    const std::size_t first = static_cast<std::size_t>(rng() % n);
    seeds.push_back(first);
    chosen[first] = true;

    std::vector<double> d2(n);
    for (std::size_t p = 0; p < n; ++p) d2[p] = sparse_sq_dist(rows[p], rows[first]);

    while (seeds.size() < k) {
        double total = 0.0;
        for (double d : d2) total += d;
        std::size_t pick = n;
        if (total > 0.0) {
            const double r = next_u01(rng) * total;
            double cum = 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                if (d2[p] <= 0.0) continue;
                cum += d2[p];
                if (cum > r) {
                    pick = p;
                    break;
                }
            }
            if (pick == n) {  // fp slack at the far end of the walk
                for (std::size_t p = n; p-- > 0;) {
                    if (d2[p] > 0.0) {
                        pick = p;
                        break;
                    }
                }
            }
        }
        if (pick == n) {  // all remaining points coincide with a seed
            for (std::size_t p = 0; p < n; ++p) {
                if (!chosen[p]) {
                    pick = p;
                    break;
                }
            }
        }
        seeds.push_back(pick);
        chosen[pick] = true;
        for (std::size_t p = 0; p < n; ++p) {
            d2[p] = std::min(d2[p], sparse_sq_dist(rows[p], rows[pick]));
        }
    }
    return seeds;
}

}  // namespace

double squared_distance(const SparseVector& row, const std::vector<double>& centroid) {
    double s = 0.0;
    std::size_t e = 0;
    for (std::size_t j = 0; j < centroid.size(); ++j) {
        double x = 0.0;
        if (e < row.size() && row[e].col == j) {
            x = row[e].weight;
            ++e;
        }
        const double d = x - centroid[j];
        s += d * d;
    }
    return s;
}

ClusterModel fit_kmeans(const std::vector<SparseVector>& rows, std::size_t dim,
                        const ClusterConfig& cfg) {
    const std::size_t n = rows.size();
    if (cfg.k < 1 || cfg.k > n) {
        throw ValidationError("k must be between 1 and the number of rows (" +
                              std::to_string(n) + "), got " + std::to_string(cfg.k));
    }
    if (cfg.max_iter < 1) throw ValidationError("max_iter must be >= 1");
    if (cfg.tol < 0.0) throw ValidationError("tol must be non-negative");

    const std::size_t k = cfg.k;
    std::mt19937_64 rng(cfg.seed);

    ClusterModel model;
    model.config = cfg;
    model.dim = dim;
    model.centroids.assign(k, std::vector<double>(dim, 0.0));
    for (std::size_t c = 0; const std::size_t s : seed_kmeanspp(rows, cfg.k, rng)) {
        for (const SparseEntry& e : rows[s]) model.centroids[c][e.col] = e.weight;
        ++c;
    }

    std::vector<double> row_sq(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        for (const SparseEntry& e : rows[p]) row_sq[p] += e.weight * e.weight;
    }

    std::vector<std::uint32_t> assign(n, 0);
    std::vector<std::uint32_t> prev_assign;
    std::vector<double> cent_sq(k, 0.0);
    std::vector<double> point_d2(n, 0.0);
    std::vector<std::size_t> sizes(k, 0);

    for (std::uint32_t iter = 1; iter <= cfg.max_iter; ++iter) {
        model.iterations = iter;

        for (std::size_t c = 0; c < k; ++c) {
            double s = 0.0;
            for (double v : model.centroids[c]) s += v * v;
            cent_sq[c] = s;
        }

        // Assignment step: nearest centroid, ties to the lowest cluster id.
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t p = 0; p < n; ++p) {
            std::uint32_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::uint32_t c = 0; c < k; ++c) {
                const double d = std::max(
                    0.0, row_sq[p] - 2.0 * dot(rows[p], model.centroids[c]) + cent_sq[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            assign[p] = best;
            point_d2[p] = best_d;
            ++sizes[best];
        }

        // Repair: hand each empty cluster the point farthest from its
        // current centroid (never emptying another cluster in the process).
        for (std::uint32_t e = 0; e < k; ++e) {
            if (sizes[e] != 0) continue;
            std::size_t farthest = n;
            double far_d = -1.0;
            for (std::size_t p = 0; p < n; ++p) {
                if (sizes[assign[p]] < 2) continue;
                if (point_d2[p] > far_d) {
                    far_d = point_d2[p];
                    farthest = p;
                }
            }
            --sizes[assign[farthest]];
            assign[farthest] = e;
            sizes[e] = 1;
            point_d2[farthest] = 0.0;
        }

        // Update step: centroids become the means of their members.
        std::vector<std::vector<double>> means(k, std::vector<double>(dim, 0.0));
        for (std::size_t p = 0; p < n; ++p) {
            for (const SparseEntry& ent : rows[p]) means[assign[p]][ent.col] += ent.weight;
        }
        double shift_sq = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const double inv = 1.0 / static_cast<double>(sizes[c]);
            double s = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                means[c][j] *= inv;
                const double d = means[c][j] - model.centroids[c][j];
                s += d * d;
            }
            shift_sq = std::max(shift_sq, s);
        }
        model.centroids = std::move(means);

        double inertia = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            inertia += squared_distance(rows[p], model.centroids[assign[p]]);
        }
        model.iteration_inertia.push_back(inertia);
        model.inertia = inertia;

        if (assign == prev_assign) {
            // Stable assignment: the means did not move, so the assignment
            // is exactly nearest-centroid for the stored centroids.
            model.converged = true;
            break;
        }
        prev_assign = assign;
        if (std::sqrt(shift_sq) < cfg.tol) {
            model.converged = true;
            break;
        }
    }

    model.assignment = std::move(assign);
    return model;
}

ClusterModel fit_kmeans(const TermMatrix& matrix, const ClusterConfig& cfg) {
    return fit_kmeans(matrix.rows, matrix.vocabulary.size(), cfg);
}

nlohmann::ordered_json model_to_json(const ClusterModel& model,
                                     const std::vector<std::string>& vocabulary) {
    nlohmann::ordered_json j;
    j["config"] = {{"k", model.config.k},
                   {"seed", model.config.seed},
                   {"max_iter", model.config.max_iter},
                   {"tol", model.config.tol}};
    j["vocabulary"] = vocabulary;
    j["centroids"] = model.centroids;
    j["assignment"] = model.assignment;
    j["inertia"] = model.inertia;
    return j;
}

ClusterModel model_from_json(const nlohmann::json& j, std::vector<std::string>* vocabulary) {
    ClusterModel model;
    try {
        const auto& cfg = j.at("config");
        model.config.k = cfg.at("k").get<std::uint32_t>();
        model.config.seed = cfg.at("seed").get<std::uint64_t>();
        model.config.max_iter = cfg.at("max_iter").get<std::uint32_t>();
        model.config.tol = cfg.at("tol").get<double>();
        if (vocabulary) *vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
        model.centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
        model.assignment = j.at("assignment").get<std::vector<std::uint32_t>>();
        model.inertia = j.at("inertia").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad model file: ") + e.what());
    }
    model.dim = model.centroids.empty() ? 0 : model.centroids.front().size();
    return model;
}

}  // namespace mim

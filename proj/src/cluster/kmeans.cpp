#include "pcfl/cluster/kmeans.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "pcfl/common.hpp"
#include "pcfl/io/binio.hpp"
#include "pcfl/rng.hpp"

namespace pcfl::cluster {

namespace {

void validate_features(const Eigen::MatrixXd& features, int k) {
    if (features.rows() < 1) throw DataError("kmeans: empty feature matrix");
    if (!features.allFinite()) throw DataError("kmeans: non-finite features");
    if (k < 1) throw ConfigError("kmeans: k must be >= 1");
    if (k > features.rows())
        throw DataError("kmeans: k (" + std::to_string(k) + ") exceeds sample count (" +
                        std::to_string(features.rows()) + ")");
}

/// Squared distance of every sample to its nearest centroid in `centroids`
/// (first `m` rows used).
void nearest_sq_dist(const Eigen::MatrixXd& features, const Eigen::MatrixXd& centroids,
                     Eigen::Index m, Eigen::VectorXd& d2) {
    const Eigen::Index n = features.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < m; ++c) {
            const double d = (features.row(i) - centroids.row(c)).squaredNorm();
            if (d < best) best = d;
        }
        d2(i) = best;
    }
}

double objective_of(const Eigen::MatrixXd& features, const Eigen::MatrixXd& centroids,
                    const std::vector<int>& assignment) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < features.rows(); ++i)
        total += (features.row(i) - centroids.row(assignment[i])).squaredNorm();
    return total / static_cast<double>(features.rows());
}

ClusteringResult lloyd_once(const Eigen::MatrixXd& features, int k, int max_iter, double tol,
                            std::uint64_t seed) {
    const Eigen::Index n = features.rows();
    ClusteringResult res;
    res.centroids = kmeans_pp_init(features, k, seed);
    res.assignment = assign(features, res.centroids);
    res.objective = objective_of(features, res.centroids, res.assignment);
    res.objective_trace.push_back(res.objective);

    for (int iter = 0; iter < max_iter; ++iter) {
        // Mean update with empty-cluster repair: an empty cluster is reseeded
        // at the point currently farthest from its assigned centroid.
        std::vector<int> counts(k, 0);
        for (int a : res.assignment) ++counts[a];
        std::vector<char> stolen(n, 0);
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            Eigen::Index far = -1;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (stolen[i] || counts[res.assignment[i]] <= 1) continue;
                const double d =
                    (features.row(i) - res.centroids.row(res.assignment[i])).squaredNorm();
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far < 0) continue;  // nothing stealable (degenerate input)
            --counts[res.assignment[far]];
            res.assignment[far] = c;
            ++counts[c];
            stolen[far] = 1;
        }
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, features.cols());
        for (Eigen::Index i = 0; i < n; ++i) sums.row(res.assignment[i]) += features.row(i);
        for (int c = 0; c < k; ++c)
            if (counts[c] > 0) res.centroids.row(c) = sums.row(c) / counts[c];

        std::vector<int> next = assign(features, res.centroids);
        const double next_obj = objective_of(features, res.centroids, next);
        res.objective_trace.push_back(next_obj);
        res.n_iterations = iter + 1;
        const bool stable = (next == res.assignment);
        const double improvement = res.objective - next_obj;
        res.assignment = std::move(next);
        res.objective = next_obj;
        if (stable || improvement <= tol * std::max(res.objective, 1e-30)) break;
    }
    return res;
}

}  // namespace

Eigen::MatrixXd kmeans_pp_init(const Eigen::MatrixXd& features, int k, std::uint64_t seed) {
    validate_features(features, k);
    const Eigen::Index n = features.rows();
    Rng rng = make_rng(seed);
    Eigen::MatrixXd centroids(k, features.cols());
    std::vector<char> chosen(n, 0);

    Eigen::Index first = static_cast<Eigen::Index>(uniform_index(rng, n));
    centroids.row(0) = features.row(first);
    chosen[first] = 1;

    Eigen::VectorXd d2(n);
    for (int c = 1; c < k; ++c) {
        nearest_sq_dist(features, centroids, c, d2);
        const double total = d2.sum();
        Eigen::Index pick = -1;
        if (total > 0.0) {
            const double r = uniform_double(rng) * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2(i);
                if (r < acc) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) pick = n - 1;  // numeric edge of the cumulative scan
        } else {
            // All remaining points coincide with chosen centroids; exhaust
            // the unchosen ones uniformly so k = N covers every sample.
            std::vector<Eigen::Index> open;
            for (Eigen::Index i = 0; i < n; ++i)
                if (!chosen[i]) open.push_back(i);
            pick = open.empty() ? static_cast<Eigen::Index>(uniform_index(rng, n))
                                : open[uniform_index(rng, open.size())];
        }
        centroids.row(c) = features.row(pick);
        chosen[pick] = 1;
    }
    return centroids;
}

std::vector<int> assign(const Eigen::MatrixXd& features, const Eigen::MatrixXd& centroids) {
    if (features.cols() != centroids.cols())
        throw DataError("assign: feature/centroid dimension mismatch");
    if (centroids.rows() < 1) throw DataError("assign: no centroids");
    std::vector<int> out(features.rows());
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        int best_c = 0;
        double best = (features.row(i) - centroids.row(0)).squaredNorm();
        for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
            const double d = (features.row(i) - centroids.row(c)).squaredNorm();
            if (d < best) {  // strict: ties stay at the lower index
                best = d;
                best_c = static_cast<int>(c);
            }
        }
        out[i] = best_c;
    }
    return out;
}

ClusteringResult kmeans_fit(const Eigen::MatrixXd& features, int k, int restarts, int max_iter,
                            double tol, std::uint64_t seed) {
    validate_features(features, k);
    if (restarts < 1) throw ConfigError("kmeans: restarts must be >= 1");
    if (max_iter < 1) throw ConfigError("kmeans: max_iter must be >= 1");

    ClusteringResult best;
    bool have = false;
    for (int r = 0; r < restarts; ++r) {
        ClusteringResult run =
            lloyd_once(features, k, max_iter, tol, derive_seed(seed, {static_cast<std::uint64_t>(r)}));
        if (!have || run.objective < best.objective) {  // strict: ties keep the earliest
            best = std::move(run);
            have = true;
        }
    }
    best.restarts_used = restarts;

    // Resolve duplicate centroids (the fit invariant) by farthest-point
    // reseeding; degenerate inputs where every point coincides are accepted.
    for (int attempt = 0; attempt < 5; ++attempt) {
        bool collision = false;
        for (Eigen::Index a = 0; a < best.centroids.rows() && !collision; ++a)
            for (Eigen::Index b = a + 1; b < best.centroids.rows() && !collision; ++b)
                if ((best.centroids.row(a) - best.centroids.row(b)).norm() == 0.0) {
                    Eigen::Index far = -1;
                    double far_d = 0.0;
                    for (Eigen::Index i = 0; i < features.rows(); ++i) {
                        const double d =
                            (features.row(i) - best.centroids.row(best.assignment[i]))
                                .squaredNorm();
                        if (d > far_d) {
                            far_d = d;
                            far = i;
                        }
                    }
                    if (far < 0) return best;  // all points on centroids already
                    best.centroids.row(b) = features.row(far);
                    collision = true;
                }
        if (!collision) break;
        best.assignment = assign(features, best.centroids);
        best.objective = objective_of(features, best.centroids, best.assignment);
    }
    return best;
}

double cluster_accuracy(const std::vector<int>& assignment, const std::vector<int>& true_labels) {
    if (assignment.empty()) throw DataError("cluster_accuracy: empty assignment");
    if (assignment.size() != true_labels.size())
        throw DataError("cluster_accuracy: assignment/label size mismatch");
    std::map<int, std::map<int, int>> votes;  // cluster -> label -> count
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (true_labels[i] < 0)
            throw DataError("cluster_accuracy: sample " + std::to_string(i) + " has no label");
        ++votes[assignment[i]][true_labels[i]];
    }
    std::map<int, int> majority;
    for (const auto& [c, counts] : votes) {
        int best_label = -1, best_count = -1;
        for (const auto& [label, count] : counts) {  // map order breaks ties low
            if (count > best_count) {
                best_count = count;
                best_label = label;
            }
        }
        majority[c] = best_label;
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (true_labels[i] == majority[assignment[i]]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(assignment.size());
}

std::vector<std::vector<int>> nearest_to_centroid(const Eigen::MatrixXd& features,
                                                  const Eigen::MatrixXd& centroids,
                                                  const std::vector<int>& assignment, int top_n) {
    if (top_n < 1) throw ConfigError("nearest_to_centroid: top_n must be >= 1");
    std::vector<std::vector<std::pair<double, int>>> per_cluster(centroids.rows());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const int c = assignment[i];
        per_cluster[c].push_back(
            {(features.row(static_cast<Eigen::Index>(i)) - centroids.row(c)).squaredNorm(),
             static_cast<int>(i)});
    }
    std::vector<std::vector<int>> out(centroids.rows());
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        auto& v = per_cluster[c];
        std::sort(v.begin(), v.end());  // by distance, then by id
        const std::size_t keep = std::min<std::size_t>(v.size(), static_cast<std::size_t>(top_n));
        for (std::size_t i = 0; i < keep; ++i) out[c].push_back(v[i].second);
    }
    return out;
}

void write_assignment_csv(const std::filesystem::path& path,
                          const std::vector<std::string>& sample_ids,
                          const std::vector<int>& assignment, const std::string& config_hash) {
    if (sample_ids.size() != assignment.size())
        throw DataError("assignment CSV: id/assignment size mismatch");
    std::ofstream os(path);
    if (!os) throw DataError("cannot open for writing: " + path.string());
    if (!config_hash.empty()) os << "# config_hash=" << config_hash << '\n';
    os << "sample_id,cluster\n";
    for (std::size_t i = 0; i < sample_ids.size(); ++i)
        os << sample_ids[i] << ',' << assignment[i] << '\n';
    if (!os) throw DataError("write failed: " + path.string());
}

void write_centroids(const std::filesystem::path& path, const Eigen::MatrixXd& centroids) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open for writing: " + path.string());
    io::write_u32(os, static_cast<std::uint32_t>(centroids.rows()));
    io::write_u32(os, static_cast<std::uint32_t>(centroids.cols()));
    for (Eigen::Index i = 0; i < centroids.rows(); ++i)
        for (Eigen::Index j = 0; j < centroids.cols(); ++j)
            io::write_f32(os, static_cast<float>(centroids(i, j)));
    if (!os) throw DataError("write failed: " + path.string());
}

Eigen::MatrixXd read_centroids(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open centroids: " + path.string());
    const std::uint32_t k = io::read_u32(is);
    const std::uint32_t d = io::read_u32(is);
    if (k == 0 || d == 0) throw DataError("malformed centroid file: " + path.string());
    Eigen::MatrixXd c(k, d);
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = 0; j < d; ++j) c(i, j) = io::read_f32(is);
    return c;
}

}  // namespace pcfl::cluster

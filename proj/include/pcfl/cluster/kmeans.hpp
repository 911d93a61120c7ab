#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pcfl::cluster {

struct ClusteringResult {
    Eigen::MatrixXd centroids;    // k x d
    std::vector<int> assignment;  // one cluster id per sample
    double objective = 0.0;       // mean squared distance to assigned centroid
    int n_iterations = 0;
    int restarts_used = 0;
    /// Objective after each Lloyd iteration of the winning restart
    /// (non-increasing by construction; asserted in tests).
    std::vector<double> objective_trace;
};

/// Seeding: first centroid uniform over samples, each next one drawn with
/// probability proportional to squared distance from the chosen set. When all
/// remaining distances are zero (duplicates), picks uniformly among unchosen
/// samples, so k = N returns exactly the input points.
Eigen::MatrixXd kmeans_pp_init(const Eigen::MatrixXd& features, int k, std::uint64_t seed);

/// Lloyd iterations from kmeans_pp_init; best of `restarts` runs (ties to the
/// lowest restart index). Empty clusters are reseeded at the point farthest
/// from its assigned centroid. Stops when the relative objective improvement
/// drops below tol, the assignment stabilizes, or max_iter is reached.
/// Restarts are distributed over `workers` threads; each restart derives its
/// own seed, so the result is identical for any worker count.
ClusteringResult kmeans_fit(const Eigen::MatrixXd& features, int k, int restarts = 10,
                            int max_iter = 300, double tol = 1e-6, std::uint64_t seed = 0,
                            int workers = 1);

/// Nearest centroid per sample (Euclidean, ties to the lower index).
std::vector<int> assign(const Eigen::MatrixXd& features, const Eigen::MatrixXd& centroids);

/// Majority-vote purity: each cluster takes its most common true label (ties
/// to the lower category id); returns the fraction of samples matching their
/// cluster's label. Labels must be >= 0.
double cluster_accuracy(const std::vector<int>& assignment, const std::vector<int>& true_labels);

/// Per-cluster sample ids sorted ascending by distance to that cluster's
/// centroid, truncated to top_n.
std::vector<std::vector<int>> nearest_to_centroid(const Eigen::MatrixXd& features,
                                                  const Eigen::MatrixXd& centroids,
                                                  const std::vector<int>& assignment, int top_n);

/// CSV "sample_id,cluster" with one row per sample. A "# config_hash=..."
/// comment is prepended when config_hash is nonempty.
void write_assignment_csv(const std::filesystem::path& path,
                          const std::vector<std::string>& sample_ids,
                          const std::vector<int>& assignment, const std::string& config_hash = "");

/// Binary centroid matrix: header {k u32, d u32}, then f32 row-major data.
void write_centroids(const std::filesystem::path& path, const Eigen::MatrixXd& centroids);
Eigen::MatrixXd read_centroids(const std::filesystem::path& path);

}  // namespace pcfl::cluster

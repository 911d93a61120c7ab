#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace pcfl::eval {

/// Multiclass linear max-margin classifier: one-vs-rest L1-hinge SVMs with L2
/// regularization, solved to tolerance by dual coordinate descent.
/// Features are standardized with the training split's per-dimension
/// mean/scale; a bias column is appended internally.
struct LinearProbe {
    Eigen::MatrixXd weights;    // (d+1) x n_classes, last row is the bias
    Eigen::VectorXd feat_mean;  // d
    Eigen::VectorXd feat_scale; // d, standard deviation floored at 1e-8
    std::vector<int> class_ids; // sorted distinct training labels
    double C = 1.0;
};

LinearProbe train_linear_probe(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                               double C, std::uint64_t seed, double tol = 1e-4,
                               int max_sweeps = 1000);

std::vector<int> probe_predict(const LinearProbe& probe, const Eigen::MatrixXd& features);

double probe_accuracy(const LinearProbe& probe, const Eigen::MatrixXd& features,
                      const std::vector<int>& labels);

/// Carves a stratified validation split (val_fraction of the rows), trains at
/// every C in c_values, keeps the best validation accuracy (ties to the
/// smaller C), then refits on all rows with the winning C.
struct ProbeSweepResult {
    LinearProbe probe;
    double best_c = 1.0;
    double val_accuracy = 0.0;
};
ProbeSweepResult train_probe_swept(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                                   const std::vector<double>& c_values, std::uint64_t seed,
                                   double val_fraction = 0.1);

}  // namespace pcfl::eval

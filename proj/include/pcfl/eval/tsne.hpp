#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace pcfl::eval {

struct TsneOptions {
    double perplexity = 30.0;  // clamped to (N-1)/3 for tiny inputs
    int iterations = 1000;
    double learning_rate = 200.0;
    int exaggeration_iters = 250;
    double exaggeration = 12.0;
    std::uint64_t seed = 0;
};

/// Exact (O(N^2)) 2-D stochastic-neighbor embedding with early exaggeration,
/// momentum, and per-coordinate gains. Deterministic given the seed.
Eigen::MatrixXd tsne(const Eigen::MatrixXd& features, const TsneOptions& opts = {});

}  // namespace pcfl::eval

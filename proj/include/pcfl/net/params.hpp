#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>

#include "pcfl/ad/tape.hpp"
#include "pcfl/rng.hpp"

namespace pcfl::net {

/// Per-channel running statistics for one normalization layer.
struct RunningStat {
    Eigen::VectorXd mean;
    Eigen::VectorXd var;
};

/// Named trainable tensors plus normalization running statistics and the
/// global step counter. One store per model (encoder + head).
class ParamStore {
public:
    Eigen::MatrixXd& at(const std::string& name);
    const Eigen::MatrixXd& at(const std::string& name) const;
    bool has(const std::string& name) const { return values_.count(name) != 0; }
    void create(const std::string& name, Eigen::MatrixXd value);

    /// Running stat for a normalization layer; created as (mean 0, var 1).
    RunningStat& stat(const std::string& name, Eigen::Index channels);
    const std::map<std::string, RunningStat>& stats() const { return stats_; }
    std::map<std::string, RunningStat>& stats() { return stats_; }

    const std::map<std::string, Eigen::MatrixXd>& values() const { return values_; }
    std::map<std::string, Eigen::MatrixXd>& values() { return values_; }

    std::int64_t step = 0;

private:
    std::map<std::string, Eigen::MatrixXd> values_;
    std::map<std::string, RunningStat> stats_;
};

/// Truncated normal (resample beyond 2 sigma), the backbone's init.
Eigen::MatrixXd truncated_normal(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng);

/// Context threaded through graph-building layer calls. param(name) exposes a
/// tape leaf per parameter (one per graph) so gradients can be read back by
/// name after backward().
struct GraphContext {
    ad::Tape& tape;
    ParamStore& params;
    bool train = false;
    double dropout = 0.0;
    Rng* rng = nullptr;  // dropout masks; required when train && dropout > 0
    double bn_momentum = 0.9;
    double bn_eps = 1e-5;
    std::map<std::string, ad::Var> param_vars;

    GraphContext(ad::Tape& t, ParamStore& p) : tape(t), params(p) {}

    ad::Var param(const std::string& name);

    /// Gradients of every parameter touched by this graph, keyed by name.
    std::map<std::string, Eigen::MatrixXd> gradients() const;
};

}  // namespace pcfl::net

#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>

#include "pcfl/net/params.hpp"

namespace pcfl::net {

/// Adaptive-moment optimizer with bias correction. Moment buffers are keyed
/// by parameter name and persisted into checkpoints, so a resumed run
/// continues exactly where it stopped. The shared global timestep is the
/// store's step counter, which step() advances.
class AdamOptimizer {
public:
    explicit AdamOptimizer(ParamStore& store, double beta1 = 0.9, double beta2 = 0.999,
                           double eps = 1e-8)
        : store_(store), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(const std::map<std::string, Eigen::MatrixXd>& grads, double lr);

    std::map<std::string, Eigen::MatrixXd>& first_moments() { return m_; }
    std::map<std::string, Eigen::MatrixXd>& second_moments() { return v_; }

private:
    ParamStore& store_;
    double beta1_, beta2_, eps_;
    std::map<std::string, Eigen::MatrixXd> m_, v_;
};

}  // namespace pcfl::net

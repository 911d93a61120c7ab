#include "pcfl/net/optimizer.hpp"

#include <cmath>

namespace pcfl::net {

void AdamOptimizer::step(const std::map<std::string, Eigen::MatrixXd>& grads, double lr) {
    const double t = static_cast<double>(store_.step + 1);
    const double mc = 1.0 - std::pow(beta1_, t);
    const double vc = 1.0 - std::pow(beta2_, t);
    for (const auto& [name, g] : grads) {
        Eigen::MatrixXd& p = store_.at(name);
        auto mit = m_.find(name);
        if (mit == m_.end()) {
            mit = m_.emplace(name, Eigen::MatrixXd::Zero(g.rows(), g.cols())).first;
            v_.emplace(name, Eigen::MatrixXd::Zero(g.rows(), g.cols()));
        }
        Eigen::MatrixXd& m = mit->second;
        Eigen::MatrixXd& v = v_.at(name);
        m = beta1_ * m + (1.0 - beta1_) * g;
        v = beta2_ * v.array().matrix() + (1.0 - beta2_) * g.array().square().matrix();
        const Eigen::ArrayXXd m_hat = m.array() / mc;
        const Eigen::ArrayXXd v_hat = v.array() / vc;
        p.array() -= lr * m_hat / (v_hat.sqrt() + eps_);
    }
    ++store_.step;
}

}  // namespace pcfl::net

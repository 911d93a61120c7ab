#include "pcfl/net/params.hpp"

#include "pcfl/common.hpp"

namespace pcfl::net {

Eigen::MatrixXd& ParamStore::at(const std::string& name) {
    auto it = values_.find(name);
    if (it == values_.end()) throw Error("unknown parameter: " + name);
    return it->second;
}

const Eigen::MatrixXd& ParamStore::at(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw Error("unknown parameter: " + name);
    return it->second;
}

void ParamStore::create(const std::string& name, Eigen::MatrixXd value) {
    if (values_.count(name)) throw Error("duplicate parameter: " + name);
    values_.emplace(name, std::move(value));
}

RunningStat& ParamStore::stat(const std::string& name, Eigen::Index channels) {
    auto it = stats_.find(name);
    if (it == stats_.end()) {
        RunningStat s;
        s.mean = Eigen::VectorXd::Zero(channels);
        s.var = Eigen::VectorXd::Ones(channels);
        it = stats_.emplace(name, std::move(s)).first;
    }
    return it->second;
}

Eigen::MatrixXd truncated_normal(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng) {
    std::normal_distribution<double> dist(0.0, stddev);
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            double v = dist(rng);
            while (std::abs(v) > 2.0 * stddev) v = dist(rng);
            out(i, j) = v;
        }
    }
    return out;
}

ad::Var GraphContext::param(const std::string& name) {
    auto it = param_vars.find(name);
    if (it != param_vars.end()) return it->second;
    ad::Var v = tape.leaf(params.at(name));
    param_vars.emplace(name, v);
    return v;
}

std::map<std::string, Eigen::MatrixXd> GraphContext::gradients() const {
    std::map<std::string, Eigen::MatrixXd> out;
    for (const auto& [name, var] : param_vars) out.emplace(name, tape.grad(var));
    return out;
}

}  // namespace pcfl::net

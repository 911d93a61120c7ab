#include "pcfl/eval/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcfl/common.hpp"
#include "pcfl/rng.hpp"

namespace pcfl::eval {

Eigen::MatrixXd tsne(const Eigen::MatrixXd& features, const TsneOptions& opts) {
    const Eigen::Index n = features.rows();
    if (n < 2) throw DataError("tsne: need at least two samples");
    if (!features.allFinite()) throw DataError("tsne: non-finite features");

    // Pairwise squared distances in feature space.
    Eigen::VectorXd sq = features.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = (-2.0 * features * features.transpose());
    d2.colwise() += sq;
    d2.rowwise() += sq.transpose();
    d2 = d2.cwiseMax(0.0);

    const double perplexity =
        std::min(opts.perplexity, std::max(1.0, static_cast<double>(n - 1) / 3.0));
    const double target_entropy = std::log(perplexity);

    // Per-row precision via binary search on the conditional entropy.
    Eigen::MatrixXd p(n, n);
    p.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
        double beta = 1.0, beta_lo = 0.0, beta_hi = std::numeric_limits<double>::infinity();
        Eigen::VectorXd row(n);
        for (int it = 0; it < 64; ++it) {
            double sum = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                row(j) = (j == i) ? 0.0 : std::exp(-beta * d2(i, j));
                sum += row(j);
            }
            if (sum <= 0.0) {  // all other points coincide with i
                row.setConstant(1.0 / static_cast<double>(n - 1));
                row(i) = 0.0;
                break;
            }
            double entropy = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (row(j) <= 0.0) continue;
                const double q = row(j) / sum;
                entropy -= q * std::log(q);
            }
            row /= sum;
            const double diff = entropy - target_entropy;
            if (std::abs(diff) < 1e-5) break;
            if (diff > 0) {  // entropy too high -> sharpen
                beta_lo = beta;
                beta = std::isinf(beta_hi) ? beta * 2.0 : 0.5 * (beta + beta_hi);
            } else {
                beta_hi = beta;
                beta = 0.5 * (beta + beta_lo);
            }
        }
        p.row(i) = row.transpose();
    }
    // Symmetrize and normalize.
    p = (p + p.transpose()).eval() / (2.0 * static_cast<double>(n));
    p = p.cwiseMax(1e-12);

    Rng rng = make_rng(opts.seed);
    std::normal_distribution<double> g(0.0, 1e-4);
    Eigen::MatrixXd y(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i, 0) = g(rng);
        y(i, 1) = g(rng);
    }

    Eigen::MatrixXd vel = Eigen::MatrixXd::Zero(n, 2);
    Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, 2);
    for (int iter = 0; iter < opts.iterations; ++iter) {
        const double exag = iter < opts.exaggeration_iters ? opts.exaggeration : 1.0;
        const double momentum = iter < opts.exaggeration_iters ? 0.5 : 0.8;

        // Student-t affinities in the embedding.
        Eigen::VectorXd y_sq = y.rowwise().squaredNorm();
        Eigen::MatrixXd num = (-2.0 * y * y.transpose());
        num.colwise() += y_sq;
        num.rowwise() += y_sq.transpose();
        num = (1.0 + num.cwiseMax(0.0).array()).inverse().matrix();
        num.diagonal().setZero();
        const double q_sum = std::max(num.sum(), 1e-12);

        Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, 2);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) continue;
                const double mult = (exag * p(i, j) - num(i, j) / q_sum) * num(i, j);
                grad.row(i) += 4.0 * mult * (y.row(i) - y.row(j));
            }
        }

        for (Eigen::Index i = 0; i < n; ++i)
            for (int d = 0; d < 2; ++d) {
                const bool same_sign = (grad(i, d) > 0) == (vel(i, d) > 0);
                gains(i, d) = std::max(0.01, same_sign ? gains(i, d) * 0.8 : gains(i, d) + 0.2);
            }
        vel = momentum * vel - opts.learning_rate * gains.cwiseProduct(grad);
        y += vel;
        y.rowwise() -= y.colwise().mean();  // keep the embedding centered
    }
    return y;
}

}  // namespace pcfl::eval

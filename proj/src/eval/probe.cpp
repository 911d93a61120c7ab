#include "pcfl/eval/probe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "pcfl/common.hpp"
#include "pcfl/rng.hpp"

namespace pcfl::eval {

namespace {

/// Dual coordinate descent for min_w 0.5|w|^2 + C sum max(0, 1 - y_i w.x_i)
/// over bias-augmented rows X (liblinear's L1-loss dual). Returns w.
Eigen::VectorXd svm_binary(const Eigen::MatrixXd& x, const std::vector<double>& y, double c,
                           double tol, int max_sweeps, Rng& rng) {
    const Eigen::Index n = x.rows();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd qii(n);
    for (Eigen::Index i = 0; i < n; ++i) qii(i) = x.row(i).squaredNorm();

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[uniform_index(rng, i)]);
        double max_pg = 0.0;
        for (Eigen::Index i : order) {
            if (qii(i) <= 0.0) continue;
            const double g = y[i] * x.row(i).dot(w) - 1.0;
            double pg = g;  // projected gradient respects the box [0, C]
            if (alpha(i) <= 0.0)
                pg = std::min(g, 0.0);
            else if (alpha(i) >= c)
                pg = std::max(g, 0.0);
            max_pg = std::max(max_pg, std::abs(pg));
            if (pg == 0.0) continue;
            const double prev = alpha(i);
            alpha(i) = std::clamp(prev - g / qii(i), 0.0, c);
            w += (alpha(i) - prev) * y[i] * x.row(i).transpose();
        }
        if (max_pg < tol) break;
    }
    return w;
}

Eigen::MatrixXd standardized(const LinearProbe& probe, const Eigen::MatrixXd& features) {
    if (features.cols() != probe.feat_mean.size())
        throw DataError("probe: feature dimension mismatch (" + std::to_string(features.cols()) +
                        " vs " + std::to_string(probe.feat_mean.size()) + ")");
    Eigen::MatrixXd x(features.rows(), features.cols() + 1);
    x.leftCols(features.cols()) =
        (features.rowwise() - probe.feat_mean.transpose()).array().rowwise() /
        probe.feat_scale.transpose().array();
    x.col(features.cols()).setOnes();  // bias
    return x;
}

}  // namespace

LinearProbe train_linear_probe(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                               double C, std::uint64_t seed, double tol, int max_sweeps) {
    if (features.rows() < 2) throw DataError("probe: need at least two samples");
    if (static_cast<std::size_t>(features.rows()) != labels.size())
        throw DataError("probe: feature/label size mismatch");
    if (C <= 0.0) throw ConfigError("probe: regularization C must be positive");

    LinearProbe probe;
    probe.C = C;
    {
        const std::set<int> distinct(labels.begin(), labels.end());
        if (distinct.size() < 2) throw DataError("probe: training labels contain a single class");
        probe.class_ids.assign(distinct.begin(), distinct.end());
    }
    probe.feat_mean = features.colwise().mean();
    Eigen::MatrixXd centered = features.rowwise() - probe.feat_mean.transpose();
    probe.feat_scale =
        (centered.array().square().colwise().mean()).sqrt().transpose().cwiseMax(1e-8);

    Eigen::MatrixXd x(features.rows(), features.cols() + 1);
    x.leftCols(features.cols()) =
        centered.array().rowwise() / probe.feat_scale.transpose().array();
    x.col(features.cols()).setOnes();

    probe.weights.resize(x.cols(), static_cast<Eigen::Index>(probe.class_ids.size()));
    for (std::size_t c = 0; c < probe.class_ids.size(); ++c) {
        std::vector<double> y(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i)
            y[i] = labels[i] == probe.class_ids[c] ? 1.0 : -1.0;
        Rng rng = make_rng(seed, {static_cast<std::uint64_t>(c)});
        probe.weights.col(static_cast<Eigen::Index>(c)) =
            svm_binary(x, y, C, tol, max_sweeps, rng);
    }
    return probe;
}

std::vector<int> probe_predict(const LinearProbe& probe, const Eigen::MatrixXd& features) {
    const Eigen::MatrixXd scores = standardized(probe, features) * probe.weights;
    std::vector<int> out(features.rows());
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < scores.cols(); ++c)
            if (scores(i, c) > scores(i, best)) best = c;  // ties keep lower class id
        out[i] = probe.class_ids[static_cast<std::size_t>(best)];
    }
    return out;
}

double probe_accuracy(const LinearProbe& probe, const Eigen::MatrixXd& features,
                      const std::vector<int>& labels) {
    if (static_cast<std::size_t>(features.rows()) != labels.size())
        throw DataError("probe: feature/label size mismatch");
    if (labels.empty()) throw DataError("probe: empty evaluation set");
    const std::vector<int> pred = probe_predict(probe, features);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (pred[i] == labels[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

ProbeSweepResult train_probe_swept(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                                   const std::vector<double>& c_values, std::uint64_t seed,
                                   double val_fraction) {
    if (c_values.empty()) throw ConfigError("probe sweep: no C values given");
    if (val_fraction <= 0.0 || val_fraction >= 1.0)
        throw ConfigError("probe sweep: val_fraction must lie in (0, 1)");

    // Stratified validation carve-out: within each class, hold out the tail
    // of a seeded shuffle (at least one sample when the class has two).
    std::map<int, std::vector<int>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[labels[i]].push_back(static_cast<int>(i));
    std::vector<int> train_idx, val_idx;
    Rng rng = make_rng(seed, {0x5EEDu});
    for (auto& [label, idx] : by_class) {
        (void)label;
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
        std::size_t hold = static_cast<std::size_t>(
            std::lround(val_fraction * static_cast<double>(idx.size())));
        if (idx.size() >= 2) hold = std::max<std::size_t>(hold, 1);
        hold = std::min(hold, idx.size() - 1);
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < idx.size() - hold ? train_idx : val_idx).push_back(idx[i]);
    }
    if (val_idx.empty() || train_idx.empty())
        throw DataError("probe sweep: split produced an empty side");

    auto take = [&](const std::vector<int>& rows, Eigen::MatrixXd& f, std::vector<int>& l) {
        f.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
        l.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            f.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
            l[i] = labels[static_cast<std::size_t>(rows[i])];
        }
    };
    Eigen::MatrixXd f_train, f_val;
    std::vector<int> l_train, l_val;
    take(train_idx, f_train, l_train);
    take(val_idx, f_val, l_val);

    std::vector<double> cs = c_values;
    std::sort(cs.begin(), cs.end());
    ProbeSweepResult result;
    bool have = false;
    for (double c : cs) {
        const LinearProbe probe = train_linear_probe(f_train, l_train, c, seed);
        const double acc = probe_accuracy(probe, f_val, l_val);
        if (!have || acc > result.val_accuracy) {  // ties keep the earlier (smaller) C
            result.best_c = c;
            result.val_accuracy = acc;
            have = true;
        }
    }
    result.probe = train_linear_probe(features, labels, result.best_c, seed);
    return result;
}

}  // namespace pcfl::eval

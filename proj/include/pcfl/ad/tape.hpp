#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "pcfl/rng.hpp"

namespace pcfl::ad {

/// Handle to a node on a Tape.
struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

/// Reverse-mode tape over dense double matrices. Values are computed eagerly;
/// backward() replays the recorded ops in reverse. One tape per forward pass.
class Tape {
public:
    /// Leaf that never receives a gradient (data, neighbor-derived constants).
    Var constant(Eigen::MatrixXd value);

    /// Leaf that accumulates a gradient (parameters, or inputs under test).
    Var leaf(Eigen::MatrixXd value);

    const Eigen::MatrixXd& value(Var v) const { return nodes_[v.id].value; }

    /// Gradient of the last backward() target w.r.t. v. Zero matrix if v was
    /// never touched by the backward sweep.
    Eigen::MatrixXd grad(Var v) const;

    /// Seeds d(out)/d(out) = 1 (out must be 1x1) and back-propagates.
    void backward(Var out);

    std::size_t size() const { return nodes_.size(); }

    // ---- ops ----
    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var hadamard(Var a, Var b);
    Var scale(Var a, double s);
    Var add_row(Var x, Var row);  // broadcast a 1xC row over all rows of x
    Var concat_cols(const std::vector<Var>& parts);
    Var gather_rows(Var x, std::vector<int> idx);
    Var relu(Var x);
    Var sum(Var x);  // 1x1

    /// Per-edge features [x_i, x_j - x_i] for neighbor table nbr (R x k,
    /// global row indices). Output row i*k+j corresponds to edge (i, nbr(i,j)).
    Var edge_features(Var x, const Eigen::ArrayXXi& nbr);

    /// Column-wise max over consecutive row groups of size `group`.
    Var group_max(Var x, int group);

    /// Batch norm with batch statistics (training). Writes the biased batch
    /// mean/var so the caller can update running averages.
    Var batch_norm_train(Var x, Var gamma, Var beta, double eps,
                         Eigen::VectorXd* batch_mean = nullptr,
                         Eigen::VectorXd* batch_var = nullptr);

    /// Batch norm with frozen statistics (eval).
    Var batch_norm_eval(Var x, Var gamma, Var beta, const Eigen::VectorXd& mean,
                        const Eigen::VectorXd& var, double eps);

    /// Inverted dropout; identity when p == 0.
    Var dropout(Var x, double p, Rng& rng);

    /// Per-block product: block b of `points` (rows_per_block x 3) times the
    /// 3x3 matrix stored row-major in row b of t9 (B x 9).
    Var block_transform(Var points, Var t9, int rows_per_block);

    /// Mean softmax cross-entropy over rows; returns a 1x1 scalar.
    Var softmax_cross_entropy(Var logits, const std::vector<int>& labels);

private:
    struct Node {
        Eigen::MatrixXd value;
        Eigen::MatrixXd grad;
        std::function<void(Tape&)> back;
        bool requires_grad = false;
        bool grad_set = false;
    };

    Var push(Eigen::MatrixXd value, bool requires_grad, std::function<void(Tape&)> back = {});
    bool needs(Var v) const { return nodes_[v.id].requires_grad; }

    template <class Expr>
    void accum(int id, const Expr& g) {
        Node& n = nodes_[id];
        if (!n.requires_grad) return;
        if (!n.grad_set) {
            n.grad = g;
            n.grad_set = true;
        } else {
            n.grad += g;
        }
    }

    std::vector<Node> nodes_;
};

}  // namespace pcfl::ad

#include "pcfl/ad/tape.hpp"

#include <cmath>
#include <memory>

#include "pcfl/common.hpp"

namespace pcfl::ad {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Var Tape::push(MatrixXd value, bool requires_grad, std::function<void(Tape&)> back) {
    Node n;
    n.value = std::move(value);
    n.back = std::move(back);
    n.requires_grad = requires_grad;
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::constant(MatrixXd value) { return push(std::move(value), false); }

Var Tape::leaf(MatrixXd value) { return push(std::move(value), true); }

MatrixXd Tape::grad(Var v) const {
    const Node& n = nodes_[v.id];
    if (n.grad_set) return n.grad;
    return MatrixXd::Zero(n.value.rows(), n.value.cols());
}

void Tape::backward(Var out) {
    Node& o = nodes_[out.id];
    if (o.value.rows() != 1 || o.value.cols() != 1)
        throw Error("backward: output must be a 1x1 scalar");
    o.grad = MatrixXd::Ones(1, 1);
    o.grad_set = true;
    for (int i = out.id; i >= 0; --i) {
        Node& n = nodes_[i];
        if (n.grad_set && n.back) n.back(*this);
    }
}

Var Tape::matmul(Var a, Var b) {
    const MatrixXd& A = value(a);
    const MatrixXd& B = value(b);
    if (A.cols() != B.rows()) throw Error("matmul: shape mismatch");
    bool rg = needs(a) || needs(b);
    Var out = push(A * B, rg);
    if (rg) {
        int oid = out.id, aid = a.id, bid = b.id;
        nodes_[out.id].back = [oid, aid, bid](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            t.accum(aid, g * t.nodes_[bid].value.transpose());
            t.accum(bid, t.nodes_[aid].value.transpose() * g);
        };
    }
    return out;
}

Var Tape::add(Var a, Var b) {
    bool rg = needs(a) || needs(b);
    Var out = push(value(a) + value(b), rg);
    if (rg) {
        int oid = out.id, aid = a.id, bid = b.id;
        nodes_[out.id].back = [oid, aid, bid](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            t.accum(aid, g);
            t.accum(bid, g);
        };
    }
    return out;
}

Var Tape::sub(Var a, Var b) {
    bool rg = needs(a) || needs(b);
    Var out = push(value(a) - value(b), rg);
    if (rg) {
        int oid = out.id, aid = a.id, bid = b.id;
        nodes_[out.id].back = [oid, aid, bid](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            t.accum(aid, g);
            t.accum(bid, -g);
        };
    }
    return out;
}

Var Tape::hadamard(Var a, Var b) {
    bool rg = needs(a) || needs(b);
    Var out = push(value(a).cwiseProduct(value(b)), rg);
    if (rg) {
        int oid = out.id, aid = a.id, bid = b.id;
        nodes_[out.id].back = [oid, aid, bid](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            t.accum(aid, g.cwiseProduct(t.nodes_[bid].value));
            t.accum(bid, g.cwiseProduct(t.nodes_[aid].value));
        };
    }
    return out;
}

Var Tape::scale(Var a, double s) {
    bool rg = needs(a);
    Var out = push(value(a) * s, rg);
    if (rg) {
        int oid = out.id, aid = a.id;
        nodes_[out.id].back = [oid, aid, s](Tape& t) { t.accum(aid, t.nodes_[oid].grad * s); };
    }
    return out;
}

Var Tape::add_row(Var x, Var row) {
    const MatrixXd& X = value(x);
    const MatrixXd& R = value(row);
    if (R.rows() != 1 || R.cols() != X.cols()) throw Error("add_row: row must be 1 x cols(x)");
    bool rg = needs(x) || needs(row);
    Var out = push(X.rowwise() + R.row(0), rg);
    if (rg) {
        int oid = out.id, xid = x.id, rid = row.id;
        nodes_[out.id].back = [oid, xid, rid](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            t.accum(xid, g);
            t.accum(rid, g.colwise().sum());
        };
    }
    return out;
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
    if (parts.empty()) throw Error("concat_cols: empty");
    Eigen::Index rows = value(parts[0]).rows();
    Eigen::Index cols = 0;
    bool rg = false;
    for (Var p : parts) {
        if (value(p).rows() != rows) throw Error("concat_cols: row mismatch");
        cols += value(p).cols();
        rg = rg || needs(p);
    }
    MatrixXd out(rows, cols);
    Eigen::Index c = 0;
    for (Var p : parts) {
        out.middleCols(c, value(p).cols()) = value(p);
        c += value(p).cols();
    }
    Var o = push(std::move(out), rg);
    if (rg) {
        std::vector<int> ids;
        std::vector<Eigen::Index> widths;
        for (Var p : parts) {
            ids.push_back(p.id);
            widths.push_back(value(p).cols());
        }
        int oid = o.id;
        nodes_[o.id].back = [oid, ids, widths](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            Eigen::Index c = 0;
            for (std::size_t i = 0; i < ids.size(); ++i) {
                t.accum(ids[i], g.middleCols(c, widths[i]));
                c += widths[i];
            }
        };
    }
    return o;
}

Var Tape::gather_rows(Var x, std::vector<int> idx) {
    const MatrixXd& X = value(x);
    MatrixXd out(static_cast<Eigen::Index>(idx.size()), X.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = X.row(idx[r]);
    bool rg = needs(x);
    Var o = push(std::move(out), rg);
    if (rg) {
        auto shared = std::make_shared<std::vector<int>>(std::move(idx));
        int oid = o.id, xid = x.id;
        nodes_[o.id].back = [oid, xid, shared](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            MatrixXd dx = MatrixXd::Zero(t.nodes_[xid].value.rows(), t.nodes_[xid].value.cols());
            for (std::size_t r = 0; r < shared->size(); ++r)
                dx.row((*shared)[r]) += g.row(static_cast<Eigen::Index>(r));
            t.accum(xid, dx);
        };
    }
    return o;
}

Var Tape::relu(Var x) {
    bool rg = needs(x);
    Var out = push(value(x).cwiseMax(0.0), rg);
    if (rg) {
        int oid = out.id, xid = x.id;
        nodes_[out.id].back = [oid, xid](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            const MatrixXd& v = t.nodes_[xid].value;
            t.accum(xid, (v.array() > 0.0).cast<double>().matrix().cwiseProduct(g));
        };
    }
    return out;
}

Var Tape::sum(Var x) {
    bool rg = needs(x);
    MatrixXd out(1, 1);
    out(0, 0) = value(x).sum();
    Var o = push(std::move(out), rg);
    if (rg) {
        int oid = o.id, xid = x.id;
        nodes_[o.id].back = [oid, xid](Tape& t) {
            double g = t.nodes_[oid].grad(0, 0);
            const MatrixXd& v = t.nodes_[xid].value;
            t.accum(xid, MatrixXd::Constant(v.rows(), v.cols(), g));
        };
    }
    return o;
}

Var Tape::edge_features(Var x, const Eigen::ArrayXXi& nbr) {
    const MatrixXd& X = value(x);
    const Eigen::Index rows = X.rows();
    const Eigen::Index C = X.cols();
    const Eigen::Index k = nbr.cols();
    if (nbr.rows() != rows) throw Error("edge_features: neighbor table row mismatch");
    MatrixXd out(rows * k, 2 * C);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const int nj = nbr(i, j);
            out.block(i * k + j, 0, 1, C) = X.row(i);
            out.block(i * k + j, C, 1, C) = X.row(nj) - X.row(i);
        }
    }
    bool rg = needs(x);
    Var o = push(std::move(out), rg);
    if (rg) {
        auto tbl = std::make_shared<Eigen::ArrayXXi>(nbr);
        int oid = o.id, xid = x.id;
        nodes_[o.id].back = [oid, xid, tbl, C, k](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            const MatrixXd& X = t.nodes_[xid].value;
            MatrixXd dx = MatrixXd::Zero(X.rows(), X.cols());
            for (Eigen::Index i = 0; i < X.rows(); ++i) {
                for (Eigen::Index j = 0; j < k; ++j) {
                    const Eigen::Index e = i * k + j;
                    dx.row(i) += g.block(e, 0, 1, C) - g.block(e, C, 1, C);
                    dx.row((*tbl)(i, j)) += g.block(e, C, 1, C);
                }
            }
            t.accum(xid, dx);
        };
    }
    return o;
}

Var Tape::group_max(Var x, int group) {
    const MatrixXd& X = value(x);
    if (group <= 0 || X.rows() % group != 0) throw Error("group_max: rows not divisible by group");
    const Eigen::Index out_rows = X.rows() / group;
    const Eigen::Index C = X.cols();
    MatrixXd out(out_rows, C);
    auto arg = std::make_shared<Eigen::ArrayXXi>(out_rows, C);
    for (Eigen::Index r = 0; r < out_rows; ++r) {
        for (Eigen::Index c = 0; c < C; ++c) {
            double best = X(r * group, c);
            Eigen::Index bi = r * group;
            for (Eigen::Index j = 1; j < group; ++j) {
                const double v = X(r * group + j, c);
                if (v > best) {
                    best = v;
                    bi = r * group + j;
                }
            }
            out(r, c) = best;
            (*arg)(r, c) = static_cast<int>(bi);
        }
    }
    bool rg = needs(x);
    Var o = push(std::move(out), rg);
    if (rg) {
        int oid = o.id, xid = x.id;
        nodes_[o.id].back = [oid, xid, arg](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            const MatrixXd& X = t.nodes_[xid].value;
            MatrixXd dx = MatrixXd::Zero(X.rows(), X.cols());
            for (Eigen::Index r = 0; r < g.rows(); ++r)
                for (Eigen::Index c = 0; c < g.cols(); ++c) dx((*arg)(r, c), c) += g(r, c);
            t.accum(xid, dx);
        };
    }
    return o;
}

Var Tape::batch_norm_train(Var x, Var gamma, Var beta, double eps, VectorXd* batch_mean,
                           VectorXd* batch_var) {
    const MatrixXd& X = value(x);
    const Eigen::Index R = X.rows();
    Eigen::RowVectorXd mu = X.colwise().mean();
    Eigen::RowVectorXd var =
        (X.rowwise() - mu).array().square().matrix().colwise().mean();
    Eigen::RowVectorXd istd = (var.array() + eps).rsqrt();
    auto xhat = std::make_shared<MatrixXd>((X.rowwise() - mu).array().rowwise() * istd.array());
    if (batch_mean) *batch_mean = mu.transpose();
    if (batch_var) *batch_var = var.transpose();
    MatrixXd y = (xhat->array().rowwise() * value(gamma).row(0).array()).rowwise() +
                 value(beta).row(0).array();
    bool rg = needs(x) || needs(gamma) || needs(beta);
    Var o = push(std::move(y), rg);
    if (rg) {
        auto istd_s = std::make_shared<Eigen::RowVectorXd>(istd);
        int oid = o.id, xid = x.id, gid = gamma.id, bid = beta.id;
        nodes_[o.id].back = [oid, xid, gid, bid, xhat, istd_s, R](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            t.accum(gid, g.cwiseProduct(*xhat).colwise().sum());
            t.accum(bid, g.colwise().sum());
            if (t.nodes_[xid].requires_grad) {
                MatrixXd dxhat = g.array().rowwise() * t.nodes_[gid].value.row(0).array();
                Eigen::RowVectorXd s1 = dxhat.colwise().sum() / double(R);
                Eigen::RowVectorXd s2 = dxhat.cwiseProduct(*xhat).colwise().sum() / double(R);
                MatrixXd dx =
                    ((dxhat.rowwise() - s1) - (xhat->array().rowwise() * s2.array()).matrix())
                        .array()
                        .rowwise() *
                    istd_s->array();
                t.accum(xid, dx);
            }
        };
    }
    return o;
}

Var Tape::batch_norm_eval(Var x, Var gamma, Var beta, const VectorXd& mean, const VectorXd& var,
                          double eps) {
    const MatrixXd& X = value(x);
    Eigen::RowVectorXd istd = (var.transpose().array() + eps).rsqrt();
    auto xhat = std::make_shared<MatrixXd>(
        (X.rowwise() - mean.transpose()).array().rowwise() * istd.array());
    MatrixXd y = (xhat->array().rowwise() * value(gamma).row(0).array()).rowwise() +
                 value(beta).row(0).array();
    bool rg = needs(x) || needs(gamma) || needs(beta);
    Var o = push(std::move(y), rg);
    if (rg) {
        auto istd_s = std::make_shared<Eigen::RowVectorXd>(istd);
        int oid = o.id, xid = x.id, gid = gamma.id, bid = beta.id;
        nodes_[o.id].back = [oid, xid, gid, bid, xhat, istd_s](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            t.accum(gid, g.cwiseProduct(*xhat).colwise().sum());
            t.accum(bid, g.colwise().sum());
            if (t.nodes_[xid].requires_grad) {
                MatrixXd dx = (g.array().rowwise() *
                               (t.nodes_[gid].value.row(0).array() * istd_s->array()))
                                  .matrix();
                t.accum(xid, dx);
            }
        };
    }
    return o;
}

Var Tape::dropout(Var x, double p, Rng& rng) {
    if (p <= 0.0) return x;
    if (p >= 1.0) throw Error("dropout: p must be < 1");
    const MatrixXd& X = value(x);
    auto mask = std::make_shared<MatrixXd>(X.rows(), X.cols());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double keep = 1.0 - p;
    for (Eigen::Index c = 0; c < X.cols(); ++c)
        for (Eigen::Index r = 0; r < X.rows(); ++r)
            (*mask)(r, c) = u(rng) < keep ? 1.0 / keep : 0.0;
    bool rg = needs(x);
    Var o = push(X.cwiseProduct(*mask), rg);
    if (rg) {
        int oid = o.id, xid = x.id;
        nodes_[o.id].back = [oid, xid, mask](Tape& t) {
            t.accum(xid, t.nodes_[oid].grad.cwiseProduct(*mask));
        };
    }
    return o;
}

Var Tape::block_transform(Var points, Var t9, int rows_per_block) {
    const MatrixXd& X = value(points);
    const MatrixXd& T = value(t9);
    if (X.cols() != 3 || T.cols() != 9) throw Error("block_transform: bad shapes");
    if (X.rows() != T.rows() * rows_per_block) throw Error("block_transform: block count mismatch");
    const Eigen::Index B = T.rows();
    MatrixXd out(X.rows(), 3);
    for (Eigen::Index b = 0; b < B; ++b) {
        Eigen::Matrix3d Tb;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) Tb(r, c) = T(b, 3 * r + c);
        out.middleRows(b * rows_per_block, rows_per_block) =
            X.middleRows(b * rows_per_block, rows_per_block) * Tb;
    }
    bool rg = needs(points) || needs(t9);
    Var o = push(std::move(out), rg);
    if (rg) {
        int oid = o.id, xid = points.id, tid = t9.id, n = rows_per_block;
        nodes_[o.id].back = [oid, xid, tid, n](Tape& t) {
            const MatrixXd& g = t.nodes_[oid].grad;
            const MatrixXd& X = t.nodes_[xid].value;
            const MatrixXd& T = t.nodes_[tid].value;
            const Eigen::Index B = T.rows();
            if (t.nodes_[xid].requires_grad) {
                MatrixXd dx(X.rows(), 3);
                for (Eigen::Index b = 0; b < B; ++b) {
                    Eigen::Matrix3d Tb;
                    for (int r = 0; r < 3; ++r)
                        for (int c = 0; c < 3; ++c) Tb(r, c) = T(b, 3 * r + c);
                    dx.middleRows(b * n, n) = g.middleRows(b * n, n) * Tb.transpose();
                }
                t.accum(xid, dx);
            }
            if (t.nodes_[tid].requires_grad) {
                MatrixXd dt = MatrixXd::Zero(B, 9);
                for (Eigen::Index b = 0; b < B; ++b) {
                    Eigen::Matrix3d dTb =
                        X.middleRows(b * n, n).transpose() * g.middleRows(b * n, n);
                    for (int r = 0; r < 3; ++r)
                        for (int c = 0; c < 3; ++c) dt(b, 3 * r + c) = dTb(r, c);
                }
                t.accum(tid, dt);
            }
        };
    }
    return o;
}

Var Tape::softmax_cross_entropy(Var logits, const std::vector<int>& labels) {
    const MatrixXd& L = value(logits);
    const Eigen::Index R = L.rows();
    if (static_cast<Eigen::Index>(labels.size()) != R)
        throw Error("softmax_cross_entropy: label count mismatch");
    auto probs = std::make_shared<MatrixXd>(R, L.cols());
    double loss = 0.0;
    for (Eigen::Index i = 0; i < R; ++i) {
        if (labels[i] < 0 || labels[i] >= L.cols())
            throw Error("softmax_cross_entropy: label out of range");
        const double m = L.row(i).maxCoeff();
        Eigen::RowVectorXd e = (L.row(i).array() - m).exp();
        const double z = e.sum();
        probs->row(i) = e / z;
        loss += std::log(z) + m - L(i, labels[i]);
    }
    loss /= static_cast<double>(R);
    MatrixXd out(1, 1);
    out(0, 0) = loss;
    bool rg = needs(logits);
    Var o = push(std::move(out), rg);
    if (rg) {
        auto lab = std::make_shared<std::vector<int>>(labels);
        int oid = o.id, lid = logits.id;
        nodes_[o.id].back = [oid, lid, probs, lab, R](Tape& t) {
            const double g = t.nodes_[oid].grad(0, 0);
            MatrixXd dl = *probs;
            for (Eigen::Index i = 0; i < R; ++i) dl(i, (*lab)[i]) -= 1.0;
            t.accum(lid, dl * (g / static_cast<double>(R)));
        };
    }
    return o;
}

}  // namespace pcfl::ad

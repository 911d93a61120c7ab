#include "pcfl/net/layers.hpp"

#include "pcfl/common.hpp"

namespace pcfl::net {

ad::Var dense(GraphContext& ctx, ad::Var x, const std::string& name) {
    ad::Var w = ctx.param(name + ".w");
    ad::Var b = ctx.param(name + ".b");
    return ctx.tape.add_row(ctx.tape.matmul(x, w), b);
}

ad::Var batch_norm(GraphContext& ctx, ad::Var x, const std::string& name) {
    ad::Var gamma = ctx.param(name + ".gamma");
    ad::Var beta = ctx.param(name + ".beta");
    const Eigen::Index channels = ctx.params.at(name + ".gamma").cols();
    RunningStat& rs = ctx.params.stat(name, channels);
    if (ctx.train) {
        Eigen::VectorXd batch_mean, batch_var;
        ad::Var out =
            ctx.tape.batch_norm_train(x, gamma, beta, ctx.bn_eps, &batch_mean, &batch_var);
        rs.mean = ctx.bn_momentum * rs.mean + (1.0 - ctx.bn_momentum) * batch_mean;
        rs.var = ctx.bn_momentum * rs.var + (1.0 - ctx.bn_momentum) * batch_var;
        return out;
    }
    return ctx.tape.batch_norm_eval(x, gamma, beta, rs.mean, rs.var, ctx.bn_eps);
}

ad::Var dropout(GraphContext& ctx, ad::Var x) {
    if (!ctx.train || ctx.dropout <= 0.0) return x;
    if (ctx.rng == nullptr) throw Error("dropout requires an RNG in train mode");
    return ctx.tape.dropout(x, ctx.dropout, *ctx.rng);
}

ad::Var edge_conv(GraphContext& ctx, ad::Var x, const Eigen::ArrayXXi& nbr,
                  const std::string& name) {
    const int k = static_cast<int>(nbr.cols());
    ad::Var edges = ctx.tape.edge_features(x, nbr);
    ad::Var h = dense(ctx, edges, name + ".lin");
    h = batch_norm(ctx, h, name + ".bn");
    h = ctx.tape.relu(h);
    return ctx.tape.group_max(h, k);
}

void init_dense(ParamStore& store, const std::string& name, Eigen::Index in, Eigen::Index out,
                Rng& rng) {
    store.create(name + ".w", truncated_normal(in, out, 0.03, rng));
    store.create(name + ".b", Eigen::MatrixXd::Zero(1, out));
}

void init_dense_constant(ParamStore& store, const std::string& name, Eigen::Index in,
                         const Eigen::MatrixXd& bias_value) {
    Eigen::MatrixXd bias(1, bias_value.size());
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < bias_value.rows(); ++i)
        for (Eigen::Index j = 0; j < bias_value.cols(); ++j) bias(0, p++) = bias_value(i, j);
    store.create(name + ".w", Eigen::MatrixXd::Zero(in, bias_value.size()));
    store.create(name + ".b", std::move(bias));
}

void init_batch_norm(ParamStore& store, const std::string& name, Eigen::Index channels) {
    store.create(name + ".gamma", Eigen::MatrixXd::Ones(1, channels));
    store.create(name + ".beta", Eigen::MatrixXd::Zero(1, channels));
    store.stat(name, channels);
}

}  // namespace pcfl::net

#include "pcfl/net/encoder.hpp"

#include <numeric>
#include <string>

#include "pcfl/common.hpp"
#include "pcfl/net/knn.hpp"
#include "pcfl/net/layers.hpp"

namespace pcfl::net {

namespace {

void validate_config(const EncoderConfig& cfg) {
    if (cfg.k_neighbors < 1) throw ConfigError("encoder k_neighbors must be >= 1");
    if (cfg.edgeconv_channels.empty()) throw ConfigError("encoder needs at least one edge-conv layer");
    for (int c : cfg.edgeconv_channels)
        if (c < 1) throw ConfigError("edge-conv channel counts must be positive");
    if (cfg.embed_channels < 1) throw ConfigError("embed_channels must be positive");
    if (cfg.use_spatial_transform && cfg.tnet_channels.size() != 3)
        throw ConfigError("tnet_channels must list exactly three widths");
}

}  // namespace

void init_encoder(ParamStore& store, const EncoderConfig& cfg, Rng& rng) {
    validate_config(cfg);
    if (cfg.use_spatial_transform) {
        const auto& t = cfg.tnet_channels;
        init_dense(store, "enc.tnet.mlp1", 3, t[0], rng);
        init_batch_norm(store, "enc.tnet.mlp1.bn", t[0]);
        init_dense(store, "enc.tnet.mlp2", t[0], t[1], rng);
        init_batch_norm(store, "enc.tnet.mlp2.bn", t[1]);
        init_dense(store, "enc.tnet.fc", t[1], t[2], rng);
        init_batch_norm(store, "enc.tnet.fc.bn", t[2]);
        // Output layer starts as the identity transform so an untrained
        // encoder sees unrotated geometry.
        init_dense_constant(store, "enc.tnet.out", t[2], Eigen::MatrixXd::Identity(3, 3));
    }
    int prev = 3;
    for (std::size_t l = 0; l < cfg.edgeconv_channels.size(); ++l) {
        const int c = cfg.edgeconv_channels[l];
        const std::string name = "enc.edge" + std::to_string(l);
        init_dense(store, name + ".lin", 2 * prev, c, rng);
        init_batch_norm(store, name + ".bn", c);
        prev = c;
    }
    const int cat = std::accumulate(cfg.edgeconv_channels.begin(), cfg.edgeconv_channels.end(), 0);
    init_dense(store, "enc.embed", cat, cfg.embed_channels, rng);
    init_batch_norm(store, "enc.embed.bn", cfg.embed_channels);
}

ad::Var encode_batch(GraphContext& ctx, const Eigen::MatrixXd& points, int n_clouds,
                     const EncoderConfig& cfg, EncoderTrace* trace) {
    validate_config(cfg);
    if (points.cols() != 3) throw DataError("encoder input must be N x 3");
    if (n_clouds < 1) throw DataError("encoder needs at least one cloud");
    if (points.rows() % n_clouds != 0)
        throw DataError("encoder input rows not divisible by cloud count");
    const int n = static_cast<int>(points.rows()) / n_clouds;
    if (n <= cfg.k_neighbors)
        throw DataError("each cloud needs more than k_neighbors points (" +
                        std::to_string(n) + " <= " + std::to_string(cfg.k_neighbors) + ")");

    ad::Var x = ctx.tape.constant(points);
    if (cfg.use_spatial_transform) {
        ad::Var h = dense(ctx, x, "enc.tnet.mlp1");
        h = ctx.tape.relu(batch_norm(ctx, h, "enc.tnet.mlp1.bn"));
        h = dense(ctx, h, "enc.tnet.mlp2");
        h = ctx.tape.relu(batch_norm(ctx, h, "enc.tnet.mlp2.bn"));
        ad::Var pooled = ctx.tape.group_max(h, n);
        ad::Var g = dense(ctx, pooled, "enc.tnet.fc");
        g = ctx.tape.relu(batch_norm(ctx, g, "enc.tnet.fc.bn"));
        ad::Var t9 = dense(ctx, g, "enc.tnet.out");
        if (trace) trace->transforms = ctx.tape.value(t9);
        x = ctx.tape.block_transform(x, t9, n);
    }

    std::vector<ad::Var> layer_outputs;
    ad::Var cur = x;
    for (std::size_t l = 0; l < cfg.edgeconv_channels.size(); ++l) {
        const Eigen::MatrixXd& feat = ctx.tape.value(cur);
        Eigen::ArrayXXi nbr = knn_blocks(feat, n, cfg.k_neighbors);
        if (trace) trace->neighbor_tables.push_back(nbr);
        cur = edge_conv(ctx, cur, nbr, "enc.edge" + std::to_string(l));
        layer_outputs.push_back(cur);
    }

    ad::Var cat = layer_outputs.size() == 1 ? layer_outputs[0]
                                            : ctx.tape.concat_cols(layer_outputs);
    ad::Var emb = dense(ctx, cat, "enc.embed");
    emb = ctx.tape.relu(batch_norm(ctx, emb, "enc.embed.bn"));
    return ctx.tape.group_max(emb, n);
}

Eigen::MatrixXd encode_batch_eval(ParamStore& params, const Eigen::MatrixXd& points, int n_clouds,
                                  const EncoderConfig& cfg) {
    ad::Tape tape;
    GraphContext ctx(tape, params);
    ctx.train = false;
    ad::Var emb = encode_batch(ctx, points, n_clouds, cfg);
    return tape.value(emb);
}

}  // namespace pcfl::net

#include "pcfl/net/heads.hpp"

#include <string>

#include "pcfl/common.hpp"
#include "pcfl/net/layers.hpp"

namespace pcfl::net {

namespace {

void init_mlp(ParamStore& store, const std::string& prefix, int in,
              const std::vector<int>& hidden, int out, Rng& rng) {
    int prev = in;
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        if (hidden[i] < 1) throw ConfigError("head hidden widths must be positive");
        const std::string name = prefix + ".fc" + std::to_string(i + 1);
        init_dense(store, name, prev, hidden[i], rng);
        init_batch_norm(store, name + ".bn", hidden[i]);
        prev = hidden[i];
    }
    init_dense(store, prefix + ".out", prev, out, rng);
}

ad::Var mlp(GraphContext& ctx, ad::Var x, const std::string& prefix,
            const std::vector<int>& hidden) {
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        const std::string name = prefix + ".fc" + std::to_string(i + 1);
        x = dense(ctx, x, name);
        x = ctx.tape.relu(batch_norm(ctx, x, name + ".bn"));
        x = dropout(ctx, x);
    }
    return dense(ctx, x, prefix + ".out");
}

}  // namespace

void init_contrast_head(ParamStore& store, int embed_channels, const ContrastHeadConfig& cfg,
                        Rng& rng) {
    init_mlp(store, "head.con", 2 * embed_channels, cfg.hidden, 2, rng);
}

void init_cluster_head(ParamStore& store, int embed_channels, const ClusterHeadConfig& cfg,
                       Rng& rng) {
    if (cfg.n_clusters < 2) throw ConfigError("cluster head needs at least two classes");
    init_mlp(store, "head.clu", embed_channels, cfg.hidden, cfg.n_clusters, rng);
}

ad::Var contrast_head(GraphContext& ctx, ad::Var emb_a, ad::Var emb_b,
                      const ContrastHeadConfig& cfg) {
    ad::Var x = ctx.tape.concat_cols({emb_a, emb_b});
    return mlp(ctx, x, "head.con", cfg.hidden);
}

ad::Var cluster_head(GraphContext& ctx, ad::Var emb, const ClusterHeadConfig& cfg) {
    return mlp(ctx, emb, "head.clu", cfg.hidden);
}

}  // namespace pcfl::net

#pragma once

#include <vector>

#include "pcfl/ad/tape.hpp"
#include "pcfl/net/params.hpp"

namespace pcfl::net {

/// Pair-verification head: embeddings of both segments are concatenated and
/// passed through fully connected layers ending in two logits
/// (0 = different object, 1 = same object).
struct ContrastHeadConfig {
    std::vector<int> hidden{1024, 512};
};

/// Pseudo-label classification head ending in n_clusters logits.
struct ClusterHeadConfig {
    std::vector<int> hidden{512, 256};
    int n_clusters = 300;
};

void init_contrast_head(ParamStore& store, int embed_channels, const ContrastHeadConfig& cfg,
                        Rng& rng);
void init_cluster_head(ParamStore& store, int embed_channels, const ClusterHeadConfig& cfg,
                       Rng& rng);

/// emb_a, emb_b: (B x embed) from the weight-shared encoder. Returns (B x 2).
ad::Var contrast_head(GraphContext& ctx, ad::Var emb_a, ad::Var emb_b,
                      const ContrastHeadConfig& cfg);

/// emb: (B x embed). Returns (B x n_clusters).
ad::Var cluster_head(GraphContext& ctx, ad::Var emb, const ClusterHeadConfig& cfg);

}  // namespace pcfl::net

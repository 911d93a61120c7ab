#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pcfl/ad/tape.hpp"
#include "pcfl/net/params.hpp"

namespace pcfl::net {

/// Graph-convolution encoder configuration. Defaults give the full-scale
/// backbone: dynamic 20-NN graphs, four edge-conv layers (64, 64, 64, 128),
/// a 256-channel pointwise map, and global max pooling to a 256-d embedding.
struct EncoderConfig {
    int k_neighbors = 20;
    std::vector<int> edgeconv_channels{64, 64, 64, 128};
    int embed_channels = 256;
    bool use_spatial_transform = true;
    /// Spatial-transform widths: two pointwise layers, then one dense layer
    /// after pooling. The 3x3 output layer is always appended.
    std::vector<int> tnet_channels{32, 64, 32};
};

/// Optional introspection of one encode_batch call.
struct EncoderTrace {
    /// One neighbor table per edge-conv layer (global row indices), showing
    /// the graph was rebuilt in feature space at every layer.
    std::vector<Eigen::ArrayXXi> neighbor_tables;
    /// Per-cloud 3x3 alignment transforms, row-major, one row per cloud.
    /// Empty when the spatial transform is disabled.
    Eigen::MatrixXd transforms;
};

/// Registers all encoder parameters (names prefixed "enc.").
void init_encoder(ParamStore& store, const EncoderConfig& cfg, Rng& rng);

/// Encodes n_clouds point clouds stacked row-wise in `points`
/// ((n_clouds * N) x 3, equal N per cloud) into an (n_clouds x embed) Var.
/// Neighbor search never crosses cloud boundaries. Layer graphs are
/// recomputed from the previous layer's output features.
ad::Var encode_batch(GraphContext& ctx, const Eigen::MatrixXd& points, int n_clouds,
                     const EncoderConfig& cfg, EncoderTrace* trace = nullptr);

/// Eval-mode embedding (running normalization statistics, no dropout).
Eigen::MatrixXd encode_batch_eval(ParamStore& params, const Eigen::MatrixXd& points, int n_clouds,
                                  const EncoderConfig& cfg);

}  // namespace pcfl::net

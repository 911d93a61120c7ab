#pragma once

#include <Eigen/Dense>
#include <string>

#include "pcfl/ad/tape.hpp"
#include "pcfl/net/params.hpp"

namespace pcfl::net {

/// x (R x in) -> x*W + b, parameters "<name>.w" (in x out) and "<name>.b" (1 x out).
ad::Var dense(GraphContext& ctx, ad::Var x, const std::string& name);

/// Channel-wise normalization over the row dimension. Batch statistics in
/// train mode (running averages updated with ctx.bn_momentum); stored running
/// statistics in eval mode. Parameters "<name>.gamma" / "<name>.beta".
ad::Var batch_norm(GraphContext& ctx, ad::Var x, const std::string& name);

/// Inverted dropout with ctx.dropout in train mode; identity in eval mode.
ad::Var dropout(GraphContext& ctx, ad::Var x);

/// One edge-convolution block: per-edge features [x_i, x_j - x_i] for the
/// given neighbor table (global row indices), shared affine map to
/// out_channels, normalization, ReLU, then max over each vertex's k edges.
/// x is (R x C); nbr is (R x k); result is (R x out_channels).
ad::Var edge_conv(GraphContext& ctx, ad::Var x, const Eigen::ArrayXXi& nbr,
                  const std::string& name);

/// Parameter initializers. Each registers tensors in the store (error if the
/// name already exists). Weight std 0.03 truncated at 2 sigma; biases zero.
void init_dense(ParamStore& store, const std::string& name, Eigen::Index in, Eigen::Index out,
                Rng& rng);
/// Dense layer initialized to produce a fixed output regardless of input:
/// zero weights, bias = row-major flattening of `bias_value`.
void init_dense_constant(ParamStore& store, const std::string& name, Eigen::Index in,
                         const Eigen::MatrixXd& bias_value);
void init_batch_norm(ParamStore& store, const std::string& name, Eigen::Index channels);

}  // namespace pcfl::net

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pcfl/net/encoder.hpp"
#include "pcfl/net/heads.hpp"
#include "pcfl/net/optimizer.hpp"
#include "pcfl/net/schedule.hpp"
#include "pcfl/segment/parts.hpp"
#include "pcfl/types.hpp"

namespace pcfl::net {

struct HistoryRow {
    std::int64_t step = 0;
    double lr = 0.0;
    double loss = 0.0;      // mean training loss over the epoch
    double accuracy = 0.0;  // held-out accuracy at epoch end
};

using EpochCallback = std::function<void(int epoch, const HistoryRow&)>;

struct ContrastTrainOptions {
    EncoderConfig encoder;
    ContrastHeadConfig head;
    TrainConfig train;
    int segment_points = 128;       // network input size per segment
    bool recenter_segments = true;  // zero-mean each segment, no rescale
    bool augment = true;
    AugmentationConfig aug;
    int pairs_per_epoch = 1024;
    int eval_pairs = 256;  // fixed held-out pair set drawn from eval parts
    int nan_check_every = 100;
    EpochCallback on_epoch;  // e.g. checkpointing
};

struct ClusterTrainOptions {
    EncoderConfig encoder;
    ClusterHeadConfig head;
    TrainConfig train;
    bool augment = true;
    AugmentationConfig aug;
    double holdout_fraction = 0.1;  // per-epoch accuracy on this carve-out
    int nan_check_every = 100;
    EpochCallback on_epoch;
};

/// Siamese pair-verification training. Pairs are re-sampled from train_parts
/// every epoch (balanced composition per opts); accuracy is measured on one
/// fixed pair set drawn from eval_parts. Parameters/optimizer state must be
/// initialized by the caller. Throws NumericError when the loss goes
/// non-finite.
std::vector<HistoryRow> train_contrast(const segment::PartDataset& train_parts,
                                       const segment::PartDataset& eval_parts,
                                       ParamStore& params, AdamOptimizer& opt,
                                       const ContrastTrainOptions& opts);

/// Pair-verification accuracy of the current parameters (eval mode) on an
/// explicit pair set.
double pair_accuracy(ParamStore& params, const segment::PartDataset& parts,
                     const std::vector<segment::SegmentPair>& pairs, const EncoderConfig& enc,
                     const ContrastHeadConfig& head, int segment_points, bool recenter,
                     std::uint64_t seed, int batch_pairs = 64);

/// Classification training on full objects with the given pseudo-labels
/// (cluster IDs in [0, head.n_clusters)). A holdout carve-out provides the
/// per-epoch accuracy; the remainder is the training set.
std::vector<HistoryRow> train_cluster(const std::vector<Eigen::MatrixXd>& clouds,
                                      const std::vector<int>& pseudo_labels, ParamStore& params,
                                      AdamOptimizer& opt, const ClusterTrainOptions& opts);

}  // namespace pcfl::net

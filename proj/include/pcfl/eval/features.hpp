#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "pcfl/net/encoder.hpp"
#include "pcfl/types.hpp"

namespace pcfl::eval {

enum class InputMode { full, part, perspective };

const char* input_mode_name(InputMode mode);
InputMode parse_input_mode(const std::string& name);

/// Eval-mode embeddings plus the labels needed by probing/plotting. Rows stay
/// aligned with sample_ids; samples skipped in partial modes are absent and
/// listed in warnings.
struct FeatureTable {
    std::vector<std::string> sample_ids;
    Eigen::MatrixXd features;  // n x embed
    std::vector<int> labels;   // -1 when unlabeled
    Split split = Split::train;
    std::vector<std::string> warnings;
};

struct ExtractOptions {
    net::EncoderConfig encoder;
    InputMode mode = InputMode::full;
    int n_planes = 1;            // part mode: cuts drawn per retry
    int min_points = 128;        // part-segment admission floor
    int min_view_points = 64;    // perspective admission floor
    int segment_points = 128;    // network input size for partial modes
    bool recenter = true;        // zero-mean partial inputs (no rescale)
    int max_retries = 20;        // per sample, before skip + warning
    int batch_clouds = 32;
    std::uint64_t seed = 0;
};

/// One embedding per sample. mode=full encodes the cloud as stored;
/// mode=part encodes one random admissible half-space segment; and
/// mode=perspective one random self-occluded view. Deterministic given seed.
FeatureTable extract_features(const Dataset& dataset, net::ParamStore& params,
                              const ExtractOptions& opts);

}  // namespace pcfl::eval

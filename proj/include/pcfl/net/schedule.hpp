#pragma once

#include <cstdint>

namespace pcfl::net {

/// Optimizer/schedule settings shared by both training stages. "momentum"
/// configures the first-moment coefficient of the adaptive-moment update
/// (second moment 0.999, epsilon 1e-8).
struct TrainConfig {
    double base_lr = 0.001;
    double momentum = 0.9;
    double lr_decay_rate = 0.7;
    std::int64_t lr_decay_steps = 200000;
    int batch_size = 32;
    double dropout = 0.5;
    int epochs = 10;
    std::uint64_t seed = 0;
};

/// Staircase schedule: base_lr * decay^floor(step / decay_steps), never below
/// 1e-5.
double lr_at(std::int64_t step, const TrainConfig& cfg);

}  // namespace pcfl::net

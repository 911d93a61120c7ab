#include "pcfl/net/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "pcfl/common.hpp"

namespace pcfl::net {

double lr_at(std::int64_t step, const TrainConfig& cfg) {
    if (step < 0) throw ConfigError("lr_at: step must be >= 0");
    const double stairs = static_cast<double>(step / cfg.lr_decay_steps);
    const double lr = cfg.base_lr * std::pow(cfg.lr_decay_rate, stairs);
    return std::max(lr, 1e-5);
}

}  // namespace pcfl::net

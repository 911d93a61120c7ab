#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcfl/types.hpp"

namespace pcfl::data {

/// Shape vocabulary for the procedural dataset, in fixed class order.
const std::vector<std::string>& synthetic_shape_names();

/// Builds a labeled procedural dataset: `classes` shape categories (taken in
/// fixed order from the vocabulary), `per_class` samples each, `n_points`
/// surface points per sample. Scale/aspect and azimuth are randomized per
/// sample; clouds are centered by construction but NOT normalized, so sphere
/// samples keep exactly equal point norms. Deterministic given seed.
Dataset make_synthetic_dataset(int classes, int per_class, int n_points, std::uint64_t seed,
                               Split split);

}  // namespace pcfl::data

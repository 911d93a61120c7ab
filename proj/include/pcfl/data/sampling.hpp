#pragma once

#include <cstdint>

#include "pcfl/data/off_io.hpp"
#include "pcfl/rng.hpp"
#include "pcfl/types.hpp"

namespace pcfl::data {

/// Samples n points on the mesh surface: faces chosen with probability
/// proportional to area, positions uniform within each face (barycentric).
/// Deterministic given seed. Throws DataError when every face has zero area.
PointCloud sample_points_from_mesh(const Mesh& mesh, int n, std::uint64_t seed);

/// Centers the cloud at the origin and scales the farthest point to norm 1.
/// Throws DataError when all points coincide.
PointCloud normalize_unit_sphere(const PointCloud& cloud);
Eigen::MatrixXd normalize_unit_sphere(const Eigen::MatrixXd& points);

/// Rotation about the gravity (z) axis, clipped Gaussian jitter, then a
/// global shift; each part skipped when its config field disables it.
/// Deterministic given seed.
PointCloud augment(const PointCloud& cloud, const AugmentationConfig& cfg, std::uint64_t seed);
Eigen::MatrixXd augment_points(const Eigen::MatrixXd& points, const AugmentationConfig& cfg,
                               Rng& rng);

}  // namespace pcfl::data

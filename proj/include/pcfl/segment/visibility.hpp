#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "pcfl/segment/parts.hpp"

namespace pcfl::segment {

/// Indices of the points that are vertices of the 3D convex hull
/// (quickhull). Inputs with fewer than four points, or whose span is
/// degenerate (collinear/coplanar within tolerance), return all indices.
std::vector<int> convex_hull_vertices(const Eigen::MatrixXd& points);

/// Self-occlusion filter: returns the subset of points visible from
/// `view_direction` under the spherical-flipping hidden-point-removal
/// operator. The virtual camera sits at 5 cloud radii against the view
/// direction; the flip radius is 100 cloud radii. A point is visible when its
/// flipped image lies on the convex hull of the flipped cloud plus the
/// camera. The operator itself is deterministic; `seed` exists so all partial
/// -observation generators share one signature.
Segment simulate_perspective_view(const Eigen::MatrixXd& points, const std::string& source_id,
                                  const Eigen::Vector3d& view_direction, std::uint64_t seed);

}  // namespace pcfl::segment

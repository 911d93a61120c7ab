#include "pcfl/segment/visibility.hpp"

#include <cmath>

#include "pcfl/common.hpp"

namespace pcfl::segment {

Segment simulate_perspective_view(const Eigen::MatrixXd& points, const std::string& source_id,
                                  const Eigen::Vector3d& view_direction, std::uint64_t seed) {
    (void)seed;  // the operator is deterministic; see header
    if (points.rows() < 1) throw DataError("cannot take a view of an empty cloud");
    const double dn = view_direction.norm();
    if (dn < 1e-9 || !std::isfinite(dn)) throw DataError("view_direction must be a unit vector");
    const Eigen::Vector3d dir = view_direction / dn;

    Segment seg;
    seg.source_id = source_id;
    seg.plane_index = -1;
    seg.side = Side::positive;

    const Eigen::RowVector3d centroid = points.colwise().mean();
    const double radius = (points.rowwise() - centroid).rowwise().norm().maxCoeff();
    if (points.rows() == 1 || radius < 1e-12) {
        seg.points = points;
        return seg;
    }

    const Eigen::RowVector3d camera = centroid - (5.0 * radius) * dir.transpose();
    const double flip_radius = 100.0 * radius;

    const Eigen::Index n = points.rows();
    Eigen::MatrixXd flipped(n + 1, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::RowVector3d q = points.row(i) - camera;
        const double qn = q.norm();
        // Spherical flip: reflect across the sphere of flip_radius about the
        // camera; visibility becomes convex-hull membership.
        flipped.row(i) = q * (2.0 * flip_radius / qn - 1.0);
    }
    flipped.row(n).setZero();  // the camera itself

    const std::vector<int> hull = convex_hull_vertices(flipped);
    std::vector<int> visible;
    visible.reserve(hull.size());
    for (int i : hull)
        if (i < n) visible.push_back(i);
    if (visible.empty()) throw NumericError("hidden-point removal produced an empty view");

    seg.points.resize(static_cast<Eigen::Index>(visible.size()), 3);
    for (std::size_t i = 0; i < visible.size(); ++i)
        seg.points.row(static_cast<Eigen::Index>(i)) = points.row(visible[i]);
    return seg;
}

}  // namespace pcfl::segment

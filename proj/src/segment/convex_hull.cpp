#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "pcfl/common.hpp"
#include "pcfl/segment/visibility.hpp"

namespace pcfl::segment {

namespace {

struct Face {
    std::array<int, 3> v;
    Eigen::Vector3d normal;  // unit outward
    double d = 0.0;          // plane: normal . x = d
    std::vector<int> outside;
    bool alive = true;
};

double signed_dist(const Face& f, const Eigen::Vector3d& p) { return f.normal.dot(p) - f.d; }

Face make_face(int a, int b, int c, const Eigen::MatrixXd& pts,
               const Eigen::Vector3d& interior) {
    Face f;
    f.v = {a, b, c};
    const Eigen::Vector3d pa = pts.row(a), pb = pts.row(b), pc = pts.row(c);
    f.normal = (pb - pa).cross(pc - pa);
    const double n = f.normal.norm();
    if (n < 1e-30) {
        f.normal = Eigen::Vector3d::UnitZ();  // degenerate sliver; harmless
    } else {
        f.normal /= n;
    }
    f.d = f.normal.dot(pa);
    if (signed_dist(f, interior) > 0) {  // flip outward
        std::swap(f.v[1], f.v[2]);
        f.normal = -f.normal;
        f.d = -f.d;
    }
    return f;
}

std::vector<int> all_indices(Eigen::Index n) {
    std::vector<int> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = static_cast<int>(i);
    return out;
}

}  // namespace

std::vector<int> convex_hull_vertices(const Eigen::MatrixXd& points) {
    const Eigen::Index n = points.rows();
    if (points.cols() != 3) throw DataError("convex hull expects N x 3 points");
    if (n < 4) return all_indices(n);

    const Eigen::Vector3d lo = points.colwise().minCoeff();
    const Eigen::Vector3d hi = points.colwise().maxCoeff();
    const double scale = (hi - lo).norm();
    const double eps = std::max(1e-12, 1e-9 * scale);

    // Initial simplex from extreme points: a long axis, then the farthest
    // point from that line, then the farthest from that plane.
    int i0 = 0, i1 = 0;
    {
        double best = -1.0;
        std::array<int, 6> extremes{};
        for (int a = 0; a < 3; ++a) {
            Eigen::Index mn, mx;
            points.col(a).minCoeff(&mn);
            points.col(a).maxCoeff(&mx);
            extremes[2 * a] = static_cast<int>(mn);
            extremes[2 * a + 1] = static_cast<int>(mx);
        }
        for (int a : extremes)
            for (int b : extremes) {
                const double d = (points.row(a) - points.row(b)).norm();
                if (d > best) {
                    best = d;
                    i0 = a;
                    i1 = b;
                }
            }
        if (best < eps) return all_indices(n);  // all points coincide
    }
    const Eigen::Vector3d p0 = points.row(i0), p1 = points.row(i1);
    const Eigen::Vector3d axis = (p1 - p0).normalized();
    int i2 = -1;
    {
        double best = eps;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Vector3d w = points.row(i).transpose() - p0;
            const double d = (w - axis * axis.dot(w)).norm();
            if (d > best) {
                best = d;
                i2 = static_cast<int>(i);
            }
        }
        if (i2 < 0) return all_indices(n);  // collinear
    }
    const Eigen::Vector3d p2 = points.row(i2);
    const Eigen::Vector3d plane_n = (p1 - p0).cross(p2 - p0).normalized();
    int i3 = -1;
    {
        double best = eps;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = std::abs(plane_n.dot(points.row(i).transpose() - p0));
            if (d > best) {
                best = d;
                i3 = static_cast<int>(i);
            }
        }
        if (i3 < 0) return all_indices(n);  // coplanar
    }

    const Eigen::Vector3d interior =
        (p0 + p1 + p2 + points.row(i3).transpose()) / 4.0;
    std::vector<Face> faces;
    faces.push_back(make_face(i0, i1, i2, points, interior));
    faces.push_back(make_face(i0, i1, i3, points, interior));
    faces.push_back(make_face(i0, i2, i3, points, interior));
    faces.push_back(make_face(i1, i2, i3, points, interior));

    // Conflict lists: each point goes to the first face that sees it.
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2 || i == i3) continue;
        const Eigen::Vector3d p = points.row(i);
        for (Face& f : faces) {
            if (signed_dist(f, p) > eps) {
                f.outside.push_back(static_cast<int>(i));
                break;
            }
        }
    }

    const std::size_t max_iter = 64 + 16 * static_cast<std::size_t>(n);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        // Next face with unresolved outside points.
        int fi = -1;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (faces[f].alive && !faces[f].outside.empty()) {
                fi = static_cast<int>(f);
                break;
            }
        }
        if (fi < 0) break;  // hull complete

        const Face& base = faces[static_cast<std::size_t>(fi)];
        int apex = base.outside[0];
        double best = -1.0;
        for (int i : base.outside) {
            const double d = signed_dist(base, points.row(i));
            if (d > best) {
                best = d;
                apex = i;
            }
        }
        const Eigen::Vector3d ap = points.row(apex);

        // Faces visible from the apex, and the horizon: directed edges of
        // visible faces whose reverse never occurs in another visible face.
        std::vector<int> visible;
        std::map<std::pair<int, int>, int> edge_count;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (!faces[f].alive) continue;
            if (signed_dist(faces[f], ap) > eps) {
                visible.push_back(static_cast<int>(f));
                const auto& v = faces[f].v;
                for (int e = 0; e < 3; ++e) ++edge_count[{v[e], v[(e + 1) % 3]}];
            }
        }
        std::vector<std::pair<int, int>> horizon;
        for (const auto& [edge, cnt] : edge_count) {
            (void)cnt;
            if (!edge_count.count({edge.second, edge.first})) horizon.push_back(edge);
        }
        if (horizon.empty()) {
            // Numerically stuck apex; discard it rather than loop.
            auto& out = faces[static_cast<std::size_t>(fi)].outside;
            out.erase(std::remove(out.begin(), out.end(), apex), out.end());
            continue;
        }

        std::vector<int> orphans;
        for (int f : visible) {
            auto& face = faces[static_cast<std::size_t>(f)];
            face.alive = false;
            orphans.insert(orphans.end(), face.outside.begin(), face.outside.end());
            face.outside.clear();
        }

        std::vector<std::size_t> fresh;
        for (const auto& [a, b] : horizon) {
            Face f = make_face(a, b, apex, points, interior);
            fresh.push_back(faces.size());
            faces.push_back(std::move(f));
        }
        for (int i : orphans) {
            if (i == apex) continue;
            const Eigen::Vector3d p = points.row(i);
            for (std::size_t f : fresh) {
                if (signed_dist(faces[f], p) > eps) {
                    faces[f].outside.push_back(i);
                    break;
                }
            }
        }
    }

    std::vector<char> on_hull(static_cast<std::size_t>(n), 0);
    for (const Face& f : faces)
        if (f.alive)
            for (int v : f.v) on_hull[static_cast<std::size_t>(v)] = 1;
    std::vector<int> out;
    for (Eigen::Index i = 0; i < n; ++i)
        if (on_hull[static_cast<std::size_t>(i)]) out.push_back(static_cast<int>(i));
    return out;
}

}  // namespace pcfl::segment

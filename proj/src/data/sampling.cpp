#include "pcfl/data/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pcfl/common.hpp"

namespace pcfl::data {

PointCloud sample_points_from_mesh(const Mesh& mesh, int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("sample_points_from_mesh: n must be >= 1");
    const Eigen::Index f = mesh.faces.rows();
    if (f < 1) throw DataError("mesh has no faces");

    std::vector<double> cum(f);
    double total = 0.0;
    for (Eigen::Index i = 0; i < f; ++i) {
        const Eigen::Vector3d a = mesh.vertices.row(mesh.faces(i, 0));
        const Eigen::Vector3d b = mesh.vertices.row(mesh.faces(i, 1));
        const Eigen::Vector3d c = mesh.vertices.row(mesh.faces(i, 2));
        total += 0.5 * (b - a).cross(c - a).norm();
        cum[i] = total;
    }
    if (total <= 0.0) throw DataError("degenerate mesh: all faces have zero area");

    Rng rng = make_rng(seed);
    PointCloud cloud;
    cloud.points.resize(n, 3);
    for (int p = 0; p < n; ++p) {
        const double r = uniform_double(rng) * total;
        const auto it = std::upper_bound(cum.begin(), cum.end(), r);
        const Eigen::Index face =
            std::min<Eigen::Index>(it - cum.begin(), f - 1);
        const Eigen::Vector3d a = mesh.vertices.row(mesh.faces(face, 0));
        const Eigen::Vector3d b = mesh.vertices.row(mesh.faces(face, 1));
        const Eigen::Vector3d c = mesh.vertices.row(mesh.faces(face, 2));
        double u = uniform_double(rng);
        double v = uniform_double(rng);
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        cloud.points.row(p) = (a + u * (b - a) + v * (c - a)).transpose();
    }
    return cloud;
}

Eigen::MatrixXd normalize_unit_sphere(const Eigen::MatrixXd& points) {
    if (points.rows() < 1) throw DataError("cannot normalize an empty cloud");
    Eigen::MatrixXd out = points.rowwise() - points.colwise().mean();
    const double scale = out.rowwise().norm().maxCoeff();
    if (scale < 1e-12) throw DataError("cannot normalize: all points identical");
    out /= scale;
    return out;
}

PointCloud normalize_unit_sphere(const PointCloud& cloud) {
    PointCloud out = cloud;
    out.points = normalize_unit_sphere(cloud.points);
    return out;
}

Eigen::MatrixXd augment_points(const Eigen::MatrixXd& points, const AugmentationConfig& cfg,
                               Rng& rng) {
    if (!(cfg.jitter_sigma >= 0) || !(cfg.jitter_clip >= 0) || !(cfg.shift_range >= 0) ||
        !std::isfinite(cfg.jitter_sigma) || !std::isfinite(cfg.jitter_clip) ||
        !std::isfinite(cfg.shift_range))
        throw ConfigError("augmentation parameters must be finite and non-negative");
    if (cfg.jitter_sigma > 0 && cfg.jitter_clip < cfg.jitter_sigma)
        throw ConfigError("jitter_clip must be >= jitter_sigma");

    Eigen::MatrixXd out = points;
    if (cfg.rotate) {
        const double angle = uniform_double(rng) * 2.0 * M_PI;
        const double c = std::cos(angle), s = std::sin(angle);
        Eigen::Matrix3d rot;
        rot << c, -s, 0, s, c, 0, 0, 0, 1;
        out = out * rot.transpose();
    }
    if (cfg.jitter_sigma > 0) {
        std::normal_distribution<double> noise(0.0, cfg.jitter_sigma);
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < 3; ++j)
                out(i, j) += std::clamp(noise(rng), -cfg.jitter_clip, cfg.jitter_clip);
    }
    if (cfg.shift_range > 0) {
        Eigen::RowVector3d shift;
        for (int j = 0; j < 3; ++j)
            shift(j) = (2.0 * uniform_double(rng) - 1.0) * cfg.shift_range;
        out.rowwise() += shift;
    }
    return out;
}

PointCloud augment(const PointCloud& cloud, const AugmentationConfig& cfg, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    PointCloud out = cloud;
    out.points = augment_points(cloud.points, cfg, rng);
    return out;
}

}  // namespace pcfl::data

#include "pcfl/data/synthetic.hpp"

#include <cmath>

#include "pcfl/common.hpp"
#include "pcfl/data/sampling.hpp"
#include "pcfl/rng.hpp"

namespace pcfl::data {

namespace {

double uniform_in(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_double(rng);
}

Eigen::Vector3d unit_direction(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    while (true) {
        Eigen::Vector3d v(g(rng), g(rng), g(rng));
        const double n = v.norm();
        if (n > 1e-9) return v / n;
    }
}

Eigen::MatrixXd sphere(Rng& rng, int n) {
    const double r = uniform_in(rng, 0.5, 1.0);
    Eigen::MatrixXd p(n, 3);
    for (int i = 0; i < n; ++i) p.row(i) = (r * unit_direction(rng)).transpose();
    return p;
}

Eigen::MatrixXd ellipsoid(Rng& rng, int n) {
    const double a = uniform_in(rng, 0.4, 1.0);
    const double b = uniform_in(rng, 0.4, 1.0);
    const double c = uniform_in(rng, 0.9, 1.6);  // elongated so it is not a sphere
    const double w_max = std::max({b * c, a * c, a * b});
    Eigen::MatrixXd p(n, 3);
    for (int i = 0; i < n; ++i) {
        while (true) {
            const Eigen::Vector3d u = unit_direction(rng);
            // Area-density correction for the unit-sphere parametrization.
            const double w = Eigen::Vector3d(u.x() * b * c, u.y() * a * c, u.z() * a * b).norm();
            if (uniform_double(rng) * w_max <= w) {
                p.row(i) << a * u.x(), b * u.y(), c * u.z();
                break;
            }
        }
    }
    return p;
}

Eigen::MatrixXd box(Rng& rng, int n, double hx, double hy, double hz) {
    const double areas[3] = {hy * hz, hx * hz, hx * hy};  // x, y, z face pairs
    const double total = 2.0 * (areas[0] + areas[1] + areas[2]);
    Eigen::MatrixXd p(n, 3);
    for (int i = 0; i < n; ++i) {
        double r = uniform_double(rng) * total;
        int axis = 0;
        for (; axis < 2; ++axis) {
            if (r < 2.0 * areas[axis]) break;
            r -= 2.0 * areas[axis];
        }
        const double side = (r < areas[axis]) ? 1.0 : -1.0;
        const double h[3] = {hx, hy, hz};
        Eigen::Vector3d q;
        q(axis) = side * h[axis];
        const int u = (axis + 1) % 3, v = (axis + 2) % 3;
        q(u) = uniform_in(rng, -h[u], h[u]);
        q(v) = uniform_in(rng, -h[v], h[v]);
        p.row(i) = q.transpose();
    }
    return p;
}

Eigen::MatrixXd cube(Rng& rng, int n) {
    const double hx = uniform_in(rng, 0.4, 1.0);
    const double hy = uniform_in(rng, 0.4, 1.0);
    const double hz = uniform_in(rng, 0.4, 1.0);
    return box(rng, n, hx, hy, hz);
}

Eigen::MatrixXd cylinder(Rng& rng, int n) {
    const double r = uniform_in(rng, 0.3, 0.8);
    const double h = uniform_in(rng, 0.5, 1.2);  // half-height
    const double side = 2.0 * M_PI * r * 2.0 * h;
    const double cap = M_PI * r * r;
    const double total = side + 2.0 * cap;
    Eigen::MatrixXd p(n, 3);
    for (int i = 0; i < n; ++i) {
        const double pick = uniform_double(rng) * total;
        const double ang = uniform_double(rng) * 2.0 * M_PI;
        if (pick < side) {
            const double z = uniform_in(rng, -h, h);
            p.row(i) << r * std::cos(ang), r * std::sin(ang), z;
        } else {
            const double rr = r * std::sqrt(uniform_double(rng));
            const double z = (pick < side + cap) ? h : -h;
            p.row(i) << rr * std::cos(ang), rr * std::sin(ang), z;
        }
    }
    return p;
}

Eigen::MatrixXd torus(Rng& rng, int n) {
    const double major = uniform_in(rng, 0.6, 1.0);
    const double minor = uniform_in(rng, 0.15, 0.35) * major;
    Eigen::MatrixXd p(n, 3);
    for (int i = 0; i < n; ++i) {
        const double u = uniform_double(rng) * 2.0 * M_PI;
        double v;
        // Rejection weight keeps the sampling uniform over the surface.
        while (true) {
            v = uniform_double(rng) * 2.0 * M_PI;
            const double w = (major + minor * std::cos(v)) / (major + minor);
            if (uniform_double(rng) <= w) break;
        }
        const double ring = major + minor * std::cos(v);
        p.row(i) << ring * std::cos(u), ring * std::sin(u), minor * std::sin(v);
    }
    return p;
}

Eigen::MatrixXd cone(Rng& rng, int n) {
    const double r = uniform_in(rng, 0.4, 0.9);
    const double h = uniform_in(rng, 0.8, 1.6);
    const double lateral = M_PI * r * std::sqrt(r * r + h * h);
    const double base = M_PI * r * r;
    Eigen::MatrixXd p(n, 3);
    for (int i = 0; i < n; ++i) {
        const double pick = uniform_double(rng) * (lateral + base);
        const double ang = uniform_double(rng) * 2.0 * M_PI;
        if (pick < lateral) {
            const double t = std::sqrt(uniform_double(rng));  // area grows with distance from apex
            p.row(i) << t * r * std::cos(ang), t * r * std::sin(ang), h / 2.0 - t * h;
        } else {
            const double rr = r * std::sqrt(uniform_double(rng));
            p.row(i) << rr * std::cos(ang), rr * std::sin(ang), -h / 2.0;
        }
    }
    return p;
}

Eigen::MatrixXd capsule(Rng& rng, int n) {
    const double r = uniform_in(rng, 0.3, 0.6);
    const double h = uniform_in(rng, 0.4, 1.0);  // cylindrical half-height
    const double side = 2.0 * M_PI * r * 2.0 * h;
    const double caps = 4.0 * M_PI * r * r;  // two hemispheres = one sphere
    Eigen::MatrixXd p(n, 3);
    for (int i = 0; i < n; ++i) {
        const double pick = uniform_double(rng) * (side + caps);
        if (pick < side) {
            const double ang = uniform_double(rng) * 2.0 * M_PI;
            const double z = uniform_in(rng, -h, h);
            p.row(i) << r * std::cos(ang), r * std::sin(ang), z;
        } else {
            const Eigen::Vector3d d = unit_direction(rng);
            const double zc = d.z() >= 0.0 ? h : -h;
            p.row(i) << r * d.x(), r * d.y(), zc + r * d.z();
        }
    }
    return p;
}

Eigen::MatrixXd pyramid(Rng& rng, int n) {
    const double a = uniform_in(rng, 0.4, 0.9);  // base half-width
    const double h = uniform_in(rng, 0.8, 1.5);
    Mesh mesh;
    mesh.vertices.resize(5, 3);
    mesh.vertices << -a, -a, -h / 2, a, -a, -h / 2, a, a, -h / 2, -a, a, -h / 2, 0, 0, h / 2;
    mesh.faces.resize(6, 3);
    mesh.faces << 0, 2, 1, 0, 3, 2,  // base
        0, 1, 4, 1, 2, 4, 2, 3, 4, 3, 0, 4;
    return sample_points_from_mesh(mesh, n, rng()).points;
}

Eigen::MatrixXd make_shape(int shape, Rng& rng, int n) {
    switch (shape) {
        case 0: return sphere(rng, n);
        case 1: return cube(rng, n);
        case 2: return cylinder(rng, n);
        case 3: return torus(rng, n);
        case 4: return cone(rng, n);
        case 5: return capsule(rng, n);
        case 6: return pyramid(rng, n);
        case 7: return ellipsoid(rng, n);
        default: throw ConfigError("unknown synthetic shape index");
    }
}

}  // namespace

const std::vector<std::string>& synthetic_shape_names() {
    static const std::vector<std::string> names{"sphere",  "cube",    "cylinder", "torus",
                                                "cone",    "capsule", "pyramid",  "ellipsoid"};
    return names;
}

Dataset make_synthetic_dataset(int classes, int per_class, int n_points, std::uint64_t seed,
                               Split split) {
    if (classes < 2 || classes > 8)
        throw ConfigError("synthetic classes must be in [2, 8], got " + std::to_string(classes));
    if (per_class < 1 || n_points < 1)
        throw ConfigError("synthetic per_class and n_points must be positive");

    const std::string split_tag = split_name(split);
    Dataset ds;
    ds.manifest.name = "synthetic";
    ds.manifest.split = split;
    ds.manifest.sample_count = classes * per_class;
    ds.manifest.points_per_sample = n_points;

    for (int c = 0; c < classes; ++c) {
        for (int s = 0; s < per_class; ++s) {
            Rng rng = make_rng(seed, {static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(s)});
            PointCloud cloud;
            cloud.points = make_shape(c, rng, n_points);
            // Random azimuth so orientation is not a class giveaway.
            const double ang = uniform_double(rng) * 2.0 * M_PI;
            Eigen::Matrix3d rot;
            rot << std::cos(ang), -std::sin(ang), 0, std::sin(ang), std::cos(ang), 0, 0, 0, 1;
            cloud.points = cloud.points * rot.transpose();
            cloud.label = c;
            cloud.source_id = synthetic_shape_names()[c] + "/" + split_tag + "/" + std::to_string(s);
            ds.manifest.entries.push_back(
                {"synthetic://" + cloud.source_id, c, cloud.source_id});
            ds.clouds.push_back(std::move(cloud));
        }
    }
    return ds;
}

}  // namespace pcfl::data

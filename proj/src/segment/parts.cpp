#include "pcfl/segment/parts.hpp"

#include <algorithm>
#include <cmath>

#include "pcfl/common.hpp"

namespace pcfl::segment {

namespace {

/// Linear-interpolated empirical quantile of an unsorted copy.
double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

std::vector<CutPlane> generate_cut_planes(const Eigen::MatrixXd& points, int n_planes,
                                          std::uint64_t seed) {
    if (points.rows() < 1) throw DataError("cannot cut an empty cloud");
    if (n_planes < 1) throw ConfigError("n_planes must be >= 1");
    Rng rng = make_rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);

    std::vector<CutPlane> planes;
    planes.reserve(n_planes);
    std::vector<double> proj(points.rows());
    for (int i = 0; i < n_planes; ++i) {
        Eigen::Vector3d n(g(rng), g(rng), g(rng));
        while (n.norm() < 1e-9) n = Eigen::Vector3d(g(rng), g(rng), g(rng));
        n.normalize();
        for (Eigen::Index r = 0; r < points.rows(); ++r) proj[r] = points.row(r).dot(n);
        const double lo = quantile(proj, 0.10);
        const double hi = quantile(proj, 0.90);
        const double offset = lo + (hi - lo) * uniform_double(rng);
        planes.push_back({n, offset});
    }
    return planes;
}

std::pair<Segment, Segment> cut_object(const Eigen::MatrixXd& points,
                                       const std::string& source_id, const CutPlane& plane,
                                       int object_index, int plane_index) {
    if (points.rows() < 1) throw DataError("cannot cut an empty cloud");
    std::vector<Eigen::Index> pos, neg;
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
        if (points.row(r).dot(plane.normal) >= plane.offset)
            pos.push_back(r);
        else
            neg.push_back(r);
    }
    auto take = [&](const std::vector<Eigen::Index>& idx, Side side) {
        Segment s;
        s.points.resize(static_cast<Eigen::Index>(idx.size()), 3);
        for (std::size_t i = 0; i < idx.size(); ++i)
            s.points.row(static_cast<Eigen::Index>(i)) = points.row(idx[i]);
        s.source_id = source_id;
        s.object_index = object_index;
        s.plane_index = plane_index;
        s.side = side;
        return s;
    };
    return {take(pos, Side::positive), take(neg, Side::negative)};
}

PartDataset build_part_dataset(const std::vector<Eigen::MatrixXd>& clouds,
                               const std::vector<std::string>& source_ids, int n_planes,
                               int min_points, std::uint64_t seed) {
    if (clouds.size() != source_ids.size())
        throw DataError("clouds/source_ids size mismatch");
    if (min_points < 1) throw ConfigError("min_points must be >= 1");

    PartDataset out;
    for (std::size_t i = 0; i < clouds.size(); ++i) {
        const auto planes = generate_cut_planes(clouds[i], n_planes, derive_seed(seed, {i}));
        std::vector<int> mine;
        for (int j = 0; j < n_planes; ++j) {
            auto [a, b] = cut_object(clouds[i], source_ids[i], planes[j],
                                     static_cast<int>(i), j);
            for (Segment* s : {&a, &b}) {
                if (s->points.rows() >= min_points) {
                    mine.push_back(static_cast<int>(out.segments.size()));
                    out.segments.push_back(std::move(*s));
                }
            }
        }
        if (mine.empty())
            out.warnings.push_back("object '" + source_ids[i] +
                                   "' produced no segment with >= " +
                                   std::to_string(min_points) + " points; skipped");
        else
            out.segments_of_object.push_back(std::move(mine));
    }
    return out;
}

std::vector<SegmentPair> sample_pairs(const PartDataset& parts, int n_pairs,
                                      double positive_fraction, std::uint64_t seed) {
    if (n_pairs < 1) throw ConfigError("n_pairs must be >= 1");
    if (positive_fraction < 0.0 || positive_fraction > 1.0)
        throw ConfigError("positive_fraction must lie in [0, 1]");

    std::vector<int> multi;  // objects usable for positive pairs
    for (std::size_t o = 0; o < parts.segments_of_object.size(); ++o)
        if (parts.segments_of_object[o].size() >= 2) multi.push_back(static_cast<int>(o));

    const int n_pos = static_cast<int>(std::lround(n_pairs * positive_fraction));
    const int n_neg = n_pairs - n_pos;
    if (n_pos > 0 && multi.empty())
        throw DataError("positive pairs requested but no object has two segments");
    if (n_neg > 0 && parts.segments_of_object.size() < 2)
        throw DataError("negative pairs requested but fewer than two objects have segments");

    Rng rng = make_rng(seed);
    std::vector<SegmentPair> pairs;
    pairs.reserve(n_pairs);
    for (int i = 0; i < n_pos; ++i) {
        const auto& segs =
            parts.segments_of_object[multi[uniform_index(rng, multi.size())]];
        const std::size_t a = uniform_index(rng, segs.size());
        std::size_t b = uniform_index(rng, segs.size() - 1);
        if (b >= a) ++b;
        pairs.push_back({segs[a], segs[b], 1});
    }
    const std::size_t n_obj = parts.segments_of_object.size();
    for (int i = 0; i < n_neg; ++i) {
        const std::size_t oa = uniform_index(rng, n_obj);
        std::size_t ob = uniform_index(rng, n_obj - 1);
        if (ob >= oa) ++ob;
        const auto& sa = parts.segments_of_object[oa];
        const auto& sb = parts.segments_of_object[ob];
        pairs.push_back({sa[uniform_index(rng, sa.size())],
                         sb[uniform_index(rng, sb.size())], 0});
    }
    // Fisher-Yates so positives and negatives interleave in batches.
    for (std::size_t i = pairs.size(); i > 1; --i)
        std::swap(pairs[i - 1], pairs[uniform_index(rng, i)]);
    return pairs;
}

Segment resample_segment(const Segment& seg, int n, std::uint64_t seed) {
    const Eigen::Index m = seg.points.rows();
    if (m < 1) throw DataError("cannot resample an empty segment");
    if (n < 1) throw ConfigError("resample size must be >= 1");
    Rng rng = make_rng(seed);

    Segment out = seg;
    out.points.resize(n, 3);
    if (m >= n) {
        // Partial Fisher-Yates: first n entries of a random permutation.
        std::vector<Eigen::Index> idx(m);
        for (Eigen::Index i = 0; i < m; ++i) idx[i] = i;
        for (int i = 0; i < n; ++i)
            std::swap(idx[i], idx[i + static_cast<Eigen::Index>(
                                       uniform_index(rng, static_cast<std::uint64_t>(m - i)))]);
        for (int i = 0; i < n; ++i) out.points.row(i) = seg.points.row(idx[i]);
    } else {
        for (int i = 0; i < n; ++i)
            out.points.row(i) =
                seg.points.row(static_cast<Eigen::Index>(uniform_index(rng, m)));
    }
    return out;
}

}  // namespace pcfl::segment

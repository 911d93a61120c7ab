#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pcfl/rng.hpp"

namespace pcfl::segment {

// This module is label-blind by construction: every operation takes raw point
// matrices and source identifiers, never the labeled cloud type.

struct CutPlane {
    Eigen::Vector3d normal;  // unit length
    double offset = 0.0;     // plane: normal . p = offset
};

enum class Side { positive, negative };

struct Segment {
    Eigen::MatrixXd points;  // M x 3
    std::string source_id;   // parent object identifier
    int object_index = -1;   // position of the parent in the input list
    int plane_index = -1;    // -1 for non-plane provenance (e.g. views)
    Side side = Side::positive;
};

/// Training pair referencing two segments by index; label 1 iff both come
/// from the same source object.
struct SegmentPair {
    int a = -1;
    int b = -1;
    int label = 0;
};

/// All admitted segments plus provenance bookkeeping.
struct PartDataset {
    std::vector<Segment> segments;
    /// Indices of segments per source object (objects yielding none are absent).
    std::vector<std::vector<int>> segments_of_object;
    /// One warning per object that produced no admissible segment.
    std::vector<std::string> warnings;
};

/// n_planes random planes: normals uniform on the sphere; offsets uniform
/// between the 10th and 90th percentile of the cloud's projection onto each
/// normal, so every plane actually cuts the object. Deterministic given seed.
std::vector<CutPlane> generate_cut_planes(const Eigen::MatrixXd& points, int n_planes,
                                          std::uint64_t seed);

/// Splits a cloud by one plane. Points with normal . p >= offset go to the
/// positive side (ties included); the two segments partition the input
/// exactly. Empty sides are allowed here.
std::pair<Segment, Segment> cut_object(const Eigen::MatrixXd& points,
                                       const std::string& source_id, const CutPlane& plane,
                                       int object_index = -1, int plane_index = -1);

/// Cuts every object with n_planes independent planes and keeps each
/// half-space segment holding at least min_points points.
PartDataset build_part_dataset(const std::vector<Eigen::MatrixXd>& clouds,
                               const std::vector<std::string>& source_ids, int n_planes,
                               int min_points, std::uint64_t seed);

/// Samples n_pairs segment pairs: positive pairs take two distinct segments
/// of one object, negative pairs one segment from each of two objects. The
/// label-1 fraction equals positive_fraction up to rounding; output order is
/// shuffled. Throws DataError when the composition is unsatisfiable.
std::vector<SegmentPair> sample_pairs(const PartDataset& parts, int n_pairs,
                                      double positive_fraction, std::uint64_t seed);

/// Draws exactly n points: without replacement when the segment has at least
/// n, with replacement otherwise. Provenance fields are preserved.
Segment resample_segment(const Segment& seg, int n, std::uint64_t seed);

}  // namespace pcfl::segment

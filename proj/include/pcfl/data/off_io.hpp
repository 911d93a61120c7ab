#pragma once

#include <Eigen/Dense>
#include <filesystem>

namespace pcfl::data {

/// Triangle mesh; non-triangular OFF faces are fan-triangulated at load time.
struct Mesh {
    Eigen::MatrixXd vertices;  // V x 3
    Eigen::MatrixXi faces;     // F x 3, indices into vertices
};

/// Parses an ASCII OFF file. Accepts the common malformed variant where the
/// counts line is glued to the header ("OFF490 518 0"). Throws DataError on a
/// malformed header, out-of-range index, non-finite coordinate, or a face
/// with fewer than three vertices.
Mesh load_off_mesh(const std::filesystem::path& path);

}  // namespace pcfl::data

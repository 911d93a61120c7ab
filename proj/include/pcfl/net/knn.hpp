#pragma once

#include <Eigen/Dense>

namespace pcfl::net {

/// k nearest neighbors of each row of `features` by Euclidean distance,
/// excluding the row itself. Ties break toward the lower index. Throws when
/// k >= N or any coordinate is non-finite.
Eigen::ArrayXXi knn_graph(const Eigen::MatrixXd& features, int k);

/// knn_graph per consecutive block of `rows_per_block` rows; returned indices
/// are global (offset by the block start).
Eigen::ArrayXXi knn_blocks(const Eigen::MatrixXd& features, int rows_per_block, int k);

}  // namespace pcfl::net

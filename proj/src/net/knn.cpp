#include "pcfl/net/knn.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "pcfl/common.hpp"

namespace pcfl::net {

Eigen::ArrayXXi knn_graph(const Eigen::MatrixXd& features, int k) {
    const Eigen::Index n = features.rows();
    if (k < 1) throw Error("knn_graph: k must be >= 1");
    if (k >= n) throw Error("knn_graph: k must be < point count");
    if (!features.allFinite()) throw Error("knn_graph: non-finite coordinates");

    // D_ij = |x_i|^2 + |x_j|^2 - 2 x_i.x_j via one GEMM.
    Eigen::VectorXd sq = features.rowwise().squaredNorm();
    Eigen::MatrixXd d = -2.0 * (features * features.transpose());
    d.colwise() += sq;
    d.rowwise() += sq.transpose();

    Eigen::ArrayXXi nbr(n, k);
    std::vector<std::pair<double, int>> cand;
    cand.reserve(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        cand.clear();
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) cand.emplace_back(d(i, j), static_cast<int>(j));
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        for (int j = 0; j < k; ++j) nbr(i, j) = cand[j].second;
    }
    return nbr;
}

Eigen::ArrayXXi knn_blocks(const Eigen::MatrixXd& features, int rows_per_block, int k) {
    const Eigen::Index n = features.rows();
    if (rows_per_block <= 0 || n % rows_per_block != 0)
        throw Error("knn_blocks: rows not divisible by block size");
    const Eigen::Index blocks = n / rows_per_block;
    Eigen::ArrayXXi nbr(n, k);
    for (Eigen::Index b = 0; b < blocks; ++b) {
        const Eigen::Index start = b * rows_per_block;
        Eigen::ArrayXXi local = knn_graph(features.middleRows(start, rows_per_block), k);
        nbr.middleRows(start, rows_per_block) = local + static_cast<int>(start);
    }
    return nbr;
}

}  // namespace pcfl::net

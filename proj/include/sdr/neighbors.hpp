#pragma once

#include "sdr/dataset.hpp"

#include <cstddef>
#include <vector>

namespace sdr {

/// Exact k-nearest-neighbor table, row-major N x k, each row sorted by
/// (squared distance, index). Ties go to the lower index.
struct KnnTable {
    std::size_t n_points = 0;
    std::size_t k = 0;
    std::vector<int> indices;
    std::vector<double> sq_dists;

    [[nodiscard]] int index(std::size_t i, std::size_t j) const { return indices[i * k + j]; }
    [[nodiscard]] double sq_dist(std::size_t i, std::size_t j) const { return sq_dists[i * k + j]; }
};

/// Brute-force search. When `include_self` is false the query point is
/// excluded from its own neighbor list, so k must be < N; otherwise k <= N.
KnnTable knn_search(const Matrix& points, std::size_t k, bool include_self = false);

} // namespace sdr

#include "sdr/neighbors.hpp"

#include "sdr/errors.hpp"

#include <algorithm>
#include <utility>

namespace sdr {

KnnTable knn_search(const Matrix& points, std::size_t k, bool include_self)
{
    const auto n = static_cast<std::size_t>(points.rows());
    const auto dims = points.cols();
    const std::size_t available = include_self ? n : n - 1;
    if (k == 0 || n == 0 || k > available)
        throw ConfigError("knn: k=" + std::to_string(k) + " out of range for N=" + std::to_string(n));

    // Column per point keeps the inner distance loop contiguous.
    const Matrix cols = points.transpose();
    KnnTable table;
    table.n_points = n;
    table.k = k;
    table.indices.resize(n * k);
    table.sq_dists.resize(n * k);

    using Entry = std::pair<double, int>;
    std::vector<Entry> heap;
    heap.reserve(k + 1);
    for (std::size_t i = 0; i < n; ++i) {
        heap.clear();
        const double* qi = cols.data() + static_cast<Eigen::Index>(i) * dims;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i && !include_self) continue;
            const double* qj = cols.data() + static_cast<Eigen::Index>(j) * dims;
            double d = 0.0;
            for (Eigen::Index c = 0; c < dims; ++c) {
                const double t = qi[c] - qj[c];
                d += t * t;
            }
            const Entry e{d, static_cast<int>(j)};
            if (heap.size() < k) {
                heap.push_back(e);
                std::push_heap(heap.begin(), heap.end());
            } else if (e < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = e;
                std::push_heap(heap.begin(), heap.end());
            }
        }
        std::sort_heap(heap.begin(), heap.end());
        for (std::size_t j = 0; j < k; ++j) {
            table.sq_dists[i * k + j] = heap[j].first;
            table.indices[i * k + j] = heap[j].second;
        }
    }
    return table;
}

} // namespace sdr

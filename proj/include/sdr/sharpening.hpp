#pragma once

#include "sdr/dataset.hpp"

#include <cstdint>
#include <optional>

namespace sdr {

/// Density sharpening by iterated mean shift over the k nearest neighbors.
///
/// Every iteration moves all points simultaneously:
///     x <- x + step_size * (mean of kNN(x) - x)
/// with neighbors taken from the previous iterate (the point itself is not
/// its own neighbor). Neighbor ties resolve to the lower point index, so the
/// result is a pure function of the input and parameters.
struct SharpenParams {
    /// Defaults to round(sqrt(N)) when empty.
    std::optional<std::size_t> k_neighbors;
    double step_size = 0.3;
    std::size_t iterations = 10;
    /// Unused by the exact neighbor search; kept so runs record a full seed set.
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t resolved_k(std::size_t n_points) const;
};

/// One synchronous update step; returns the moved points.
Matrix sharpen_step(const Matrix& points, std::size_t k, double step_size);

/// Sum over points of |x_i - centroid(kNN(x_i))|.
double knn_shift_residual(const Matrix& points, std::size_t k);

Dataset sharpen(const Dataset& data, const SharpenParams& params);

} // namespace sdr

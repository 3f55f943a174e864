#include "sdr/sharpening.hpp"

#include "sdr/errors.hpp"
#include "sdr/neighbors.hpp"

#include <cmath>

namespace sdr {

std::size_t SharpenParams::resolved_k(std::size_t n_points) const
{
    if (k_neighbors) return *k_neighbors;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n_points)))));
}

namespace {

Matrix knn_centroids(const Matrix& points, std::size_t k)
{
    const auto table = knn_search(points, k);
    Matrix centroids = Matrix::Zero(points.rows(), points.cols());
    for (std::size_t i = 0; i < table.n_points; ++i) {
        auto row = centroids.row(static_cast<Eigen::Index>(i));
        for (std::size_t j = 0; j < k; ++j) row += points.row(table.index(i, j));
        row /= static_cast<double>(k);
    }
    return centroids;
}

} // namespace

Matrix sharpen_step(const Matrix& points, std::size_t k, double step_size)
{
    const Matrix centroids = knn_centroids(points, k);
    return points + step_size * (centroids - points);
}

double knn_shift_residual(const Matrix& points, std::size_t k)
{
    return (knn_centroids(points, k) - points).rowwise().norm().sum();
}

Dataset sharpen(const Dataset& data, const SharpenParams& params)
{
    const std::size_t n = data.size();
    const std::size_t k = params.resolved_k(n);
    if (k < 1 || k >= n)
        throw ConfigError("sharpen: k_neighbors=" + std::to_string(k) + " must satisfy 1 <= k < N=" + std::to_string(n));
    if (!(params.step_size > 0.0) || params.step_size > 1.0)
        throw ConfigError("sharpen: step_size must lie in (0, 1]");

    Dataset out = data;
    for (std::size_t it = 0; it < params.iterations; ++it) {
        out.points = sharpen_step(out.points, k, params.step_size);
        if (!out.points.allFinite())
            throw NumericError("sharpen: non-finite coordinates at iteration " + std::to_string(it + 1));
    }
    return out;
}

} // namespace sdr

#pragma once

#include "sdr/clustering.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sdr {

struct TimingRow {
    Method method = Method::kmeans;
    std::size_t n_points = 0;
    std::size_t dims = 2;
    double median_seconds = 0.0;
    std::size_t repeats = 0;
};

struct ScalingOptions {
    std::vector<std::size_t> sizes;
    std::size_t dims = 2;
    std::size_t repeats = 5;
    std::uint64_t seed = 0;
    /// Cells whose median is below this are re-timed with more repeats.
    double resolution_floor = 1e-3;
    std::size_t max_repeats = 50;
};

/// Wall-clock medians of the five clustering methods on a 5-cluster dataset
/// per size. Rows are ordered by size, then method.
std::vector<TimingRow> run_scaling(const ScalingOptions& options);

void write_timings_csv(const std::vector<TimingRow>& rows, const std::string& path);

/// Least-squares slope of log(seconds) against log(N) for one method.
double log_log_slope(const std::vector<TimingRow>& rows, Method method);

} // namespace sdr

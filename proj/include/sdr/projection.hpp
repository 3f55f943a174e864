#pragma once

#include "sdr/dataset.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sdr {

struct MdsResult {
    Matrix coords;
    /// Full spectrum of the double-centered Gram matrix, descending.
    Vector eigenvalues;
    /// Count of eigenvalues below -1e-9 * max (non-Euclidean input).
    std::size_t n_negative = 0;
};

/// Classical (Torgerson) MDS of an m x m Euclidean distance matrix.
MdsResult classical_mds(const Matrix& dist, std::size_t target_dim);

struct Projection {
    Matrix coords;
    std::vector<int> landmark_indices;
    /// Landmark Gram spectrum, descending.
    Vector eigenvalues;
    std::size_t n_negative = 0;
};

struct LmdsParams {
    /// Defaults to min(N, max(50, round(sqrt(N)))) when empty.
    std::optional<std::size_t> n_landmarks;
    std::size_t target_dim = 2;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t resolved_landmarks(std::size_t n_points) const;
};

/// MaxMin landmark selection from a seeded random first pick. Stops early
/// when every remaining point coincides with a chosen landmark.
std::vector<int> maxmin_landmarks(const Matrix& points, std::size_t count, std::uint64_t seed);

/// Landmark MDS: classical MDS on the landmarks, every other point placed by
/// distance-based triangulation against them.
Projection lmds(const Matrix& points, const LmdsParams& params);

struct PcaResult {
    Dataset reduced;
    Vector eigenvalues;
    /// n x kept principal axes.
    Matrix components;
    Vector mean;
    std::size_t n_components = 0;
    double retained_fraction = 0.0;
};

/// Keeps the fewest leading components whose eigenvalue share reaches
/// `variance_fraction`.
PcaResult pca_reduce(const Dataset& data, double variance_fraction);

/// Projection as a dataset with columns p1..pk, labels carried over.
Dataset projection_dataset(const Projection& proj, const Dataset& source);

} // namespace sdr

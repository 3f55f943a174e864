#pragma once

#include "sdr/dataset.hpp"

#include <cstdint>
#include <functional>

namespace sdr {

/// Eigenpairs sorted by descending eigenvalue; `vectors.col(i)` pairs with
/// `values(i)`. Each vector's largest-magnitude component is positive.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;
    int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls to
/// `tolerance` times the Frobenius norm of the input.
SymmetricEigen jacobi_eigen(const Matrix& symmetric, double tolerance = 1e-12, int max_sweeps = 100);

struct LanczosResult {
    Vector values;
    Matrix vectors;
    /// Largest residual |A v - lambda v| among the returned pairs.
    double max_residual = 0.0;
    std::size_t basis_size = 0;
    bool converged = false;
};

/// Matrix-free symmetric operator: writes A*x into y.
using LinearOperator = std::function<void(const Vector& x, Vector& y)>;

/// Largest `count` eigenpairs of a symmetric operator by Lanczos with full
/// reorthogonalization. The Krylov basis grows until every requested pair
/// has residual below `tolerance` or `max_basis` vectors are in use. Extra
/// runs on the complement of the accepted vectors pick up repeated eigenvalues.
LanczosResult lanczos_largest(const LinearOperator& op, std::size_t dim, std::size_t count, std::uint64_t seed,
                              double tolerance = 1e-8, std::size_t max_basis = 400);

} // namespace sdr

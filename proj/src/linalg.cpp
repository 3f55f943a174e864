#include "sdr/linalg.hpp"

#include "sdr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sdr {

namespace {

void sort_descending(Vector& values, Matrix& vectors)
{
    const auto n = values.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values(a) > values(b); });
    Vector v(n);
    Matrix m(vectors.rows(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = values(order[static_cast<std::size_t>(i)]);
        m.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
    }
    values = std::move(v);
    vectors = std::move(m);
}

void fix_signs(Matrix& vectors)
{
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index arg = 0;
        vectors.col(c).cwiseAbs().maxCoeff(&arg);
        if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
    }
}

} // namespace

SymmetricEigen jacobi_eigen(const Matrix& symmetric, double tolerance, int max_sweeps)
{
    const auto n = symmetric.rows();
    if (symmetric.cols() != n) throw ConfigError("jacobi: matrix is not square");
    if (!symmetric.allFinite()) throw NumericError("jacobi: non-finite matrix entries");

    Matrix a = symmetric;
    Matrix v = Matrix::Identity(n, n);
    const double scale = a.norm();
    SymmetricEigen out;

    auto off_norm = [&] {
        double s = 0.0;
        for (Eigen::Index q = 1; q < n; ++q)
            for (Eigen::Index p = 0; p < q; ++p) s += a(p, q) * a(p, q);
        return std::sqrt(2.0 * s);
    };

    int sweep = 0;
    for (; sweep <= max_sweeps; ++sweep) {
        if (off_norm() <= tolerance * scale) break;
        if (sweep == max_sweeps) throw NumericError("jacobi: no convergence after " + std::to_string(max_sweeps) + " sweeps");
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::hypot(theta, 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                    a(p, r) = a(r, p);
                    a(q, r) = a(r, q);
                }
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }

    out.values = a.diagonal();
    out.vectors = std::move(v);
    out.sweeps = sweep;
    sort_descending(out.values, out.vectors);
    fix_signs(out.vectors);
    return out;
}

namespace {

// One Lanczos run restricted to the orthogonal complement of `locked`.
LanczosResult lanczos_run(const LinearOperator& op, std::size_t dim, std::size_t count, std::mt19937_64& rng,
                          double tolerance, std::size_t max_basis, const Matrix& locked)
{
    const auto n = static_cast<Eigen::Index>(dim);
    const auto free_dim = dim - static_cast<std::size_t>(locked.cols());
    const auto cap = static_cast<Eigen::Index>(std::min(free_dim, std::max(max_basis, count)));

    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix basis(n, cap);
    std::vector<double> alpha;
    std::vector<double> beta;

    auto deflate = [&](Vector& v) {
        if (locked.cols() > 0) v -= locked * (locked.transpose() * v);
    };
    auto random_orthogonal = [&](Eigen::Index filled) {
        for (int attempt = 0; attempt < 10; ++attempt) {
            Vector r(n);
            for (auto& x : r) x = normal(rng);
            for (int pass = 0; pass < 2; ++pass) {
                deflate(r);
                if (filled > 0) r -= basis.leftCols(filled) * (basis.leftCols(filled).transpose() * r);
            }
            const double norm = r.norm();
            if (norm > 1e-8) return Vector(r / norm);
        }
        throw NumericError("lanczos: could not extend the Krylov basis");
    };

    basis.col(0) = random_orthogonal(0);
    Vector w(n);
    LanczosResult out;
    Eigen::Index next_check = std::min<Eigen::Index>(cap, static_cast<Eigen::Index>(std::max<std::size_t>(2 * count + 20, 40)));

    for (Eigen::Index j = 0; j < cap; ++j) {
        op(basis.col(j), w);
        const double a = basis.col(j).dot(w);
        alpha.push_back(a);
        w -= a * basis.col(j);
        if (j > 0) w -= beta.back() * basis.col(j - 1);
        for (int pass = 0; pass < 2; ++pass) {
            deflate(w);
            w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
        }
        double b = w.norm();
        const Eigen::Index m = j + 1;
        const bool last = m == cap;

        if (m >= static_cast<Eigen::Index>(count) && (m >= next_check || last)) {
            Matrix t = Matrix::Zero(m, m);
            for (Eigen::Index i = 0; i < m; ++i) {
                t(i, i) = alpha[static_cast<std::size_t>(i)];
                if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
            const auto ritz = jacobi_eigen(t);
            double worst = 0.0;
            const double ref = std::max(1.0, std::abs(ritz.values(0)));
            for (std::size_t i = 0; i < count; ++i)
                worst = std::max(worst, std::abs(b * ritz.vectors(m - 1, static_cast<Eigen::Index>(i))));
            out.max_residual = worst;
            out.converged = worst <= tolerance * ref;
            if (out.converged || last) {
                const auto c = static_cast<Eigen::Index>(count);
                out.values = ritz.values.head(c);
                out.vectors = basis.leftCols(m) * ritz.vectors.leftCols(c);
                for (Eigen::Index i = 0; i < c; ++i) out.vectors.col(i).normalize();
                out.basis_size = static_cast<std::size_t>(m);
                return out;
            }
            next_check = std::min(cap, m + 20);
        }

        if (b < 1e-10) {
            // Invariant subspace: continue from a fresh direction with a zero coupling.
            b = 0.0;
            beta.push_back(0.0);
            basis.col(j + 1) = random_orthogonal(j + 1);
        } else {
            beta.push_back(b);
            basis.col(j + 1) = w / b;
        }
    }
    throw NumericError("lanczos: internal error");
}

} // namespace

LanczosResult lanczos_largest(const LinearOperator& op, std::size_t dim, std::size_t count, std::uint64_t seed,
                              double tolerance, std::size_t max_basis)
{
    if (count == 0 || count > dim) throw ConfigError("lanczos: requested eigenpair count out of range");
    std::mt19937_64 rng(seed);
    LanczosResult out = lanczos_run(op, dim, count, rng, tolerance, max_basis, Matrix(static_cast<Eigen::Index>(dim), 0));

    // A single Krylov sequence sees one direction per eigenspace, so repeated
    // eigenvalues are missed. Probe the complement of the accepted vectors
    // and swap in anything larger than the smallest accepted value.
    const auto c = static_cast<Eigen::Index>(count);
    for (std::size_t probe = 0; probe < count && count < dim; ++probe) {
        const auto extra = lanczos_run(op, dim, 1, rng, tolerance, max_basis, out.vectors);
        const double ref = std::max(1.0, std::abs(out.values(0)));
        if (!(extra.values(0) > out.values(c - 1) + tolerance * ref)) break;
        out.values(c - 1) = extra.values(0);
        out.vectors.col(c - 1) = extra.vectors.col(0);
        out.converged = out.converged && extra.converged;
        out.max_residual = std::max(out.max_residual, extra.max_residual);
        for (Eigen::Index i = c - 1; i > 0 && out.values(i) > out.values(i - 1); --i) {
            std::swap(out.values(i), out.values(i - 1));
            out.vectors.col(i).swap(out.vectors.col(i - 1));
        }
    }
    fix_signs(out.vectors);
    return out;
}

} // namespace sdr

#include "sdr/projection.hpp"

#include "sdr/errors.hpp"
#include "sdr/linalg.hpp"

#include <cmath>
#include <random>

namespace sdr {

namespace {

// B = -1/2 J D2 J
Matrix double_center(const Matrix& sq)
{
    const Vector row_mean = sq.rowwise().mean();
    const Vector col_mean = sq.colwise().mean().transpose();
    const double grand = sq.mean();
    Matrix b = sq;
    b.colwise() -= row_mean;
    b.rowwise() -= col_mean.transpose();
    b.array() += grand;
    return -0.5 * b;
}

} // namespace

MdsResult classical_mds(const Matrix& dist, std::size_t target_dim)
{
    const auto m = dist.rows();
    if (dist.cols() != m) throw DataError("classical_mds: distance matrix is not square");
    if (target_dim < 1 || static_cast<Eigen::Index>(target_dim) > m)
        throw ConfigError("classical_mds: target_dim out of range");
    if (!dist.allFinite()) throw DataError("classical_mds: non-finite distances");
    const double scale = std::max(1.0, dist.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m; ++i) {
        if (std::abs(dist(i, i)) > 1e-12 * scale) throw DataError("classical_mds: non-zero diagonal");
        for (Eigen::Index j = 0; j < m; ++j) {
            if (dist(i, j) < 0.0) throw DataError("classical_mds: negative distance");
            if (std::abs(dist(i, j) - dist(j, i)) > 1e-9 * scale) throw DataError("classical_mds: asymmetric input");
        }
    }

    const Matrix sq = dist.cwiseProduct(dist);
    Matrix b = double_center(sq);
    b = 0.5 * (b + b.transpose());
    const auto eig = jacobi_eigen(b);

    MdsResult out;
    out.eigenvalues = eig.values;
    const double top = std::max(0.0, eig.values(0));
    for (Eigen::Index i = 0; i < m; ++i)
        if (eig.values(i) < -1e-9 * top) ++out.n_negative;
    const auto d = static_cast<Eigen::Index>(target_dim);
    out.coords.resize(m, d);
    for (Eigen::Index c = 0; c < d; ++c)
        out.coords.col(c) = eig.vectors.col(c) * std::sqrt(std::max(0.0, eig.values(c)));
    return out;
}

std::size_t LmdsParams::resolved_landmarks(std::size_t n_points) const
{
    if (n_landmarks) return *n_landmarks;
    const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n_points))));
    return std::min(n_points, std::max<std::size_t>(50, root));
}

std::vector<int> maxmin_landmarks(const Matrix& points, std::size_t count, std::uint64_t seed)
{
    const auto n = points.rows();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    std::vector<int> chosen;
    Eigen::Index next = pick(rng);
    Vector min_sq = Vector::Constant(n, std::numeric_limits<double>::infinity());
    while (chosen.size() < count) {
        chosen.push_back(static_cast<int>(next));
        min_sq = min_sq.cwiseMin((points.rowwise() - points.row(next)).rowwise().squaredNorm());
        Eigen::Index arg = 0;
        const double far = min_sq.maxCoeff(&arg); // first maximum
        if (far <= 0.0) break;
        next = arg;
    }
    return chosen;
}

Projection lmds(const Matrix& points, const LmdsParams& params)
{
    const auto n = static_cast<std::size_t>(points.rows());
    const std::size_t dims = static_cast<std::size_t>(points.cols());
    const std::size_t count = params.resolved_landmarks(n);
    if (params.target_dim < 1 || params.target_dim > dims)
        throw ConfigError("lmds: target_dim must be in [1, n]");
    if (count < 3 || count > n) throw ConfigError("lmds: n_landmarks must be in [3, N]");
    if (!points.allFinite()) throw DataError("lmds: non-finite input");

    Projection out;
    out.landmark_indices = maxmin_landmarks(points, count, params.seed);
    const auto m = static_cast<Eigen::Index>(out.landmark_indices.size());
    if (m < static_cast<Eigen::Index>(params.target_dim) + 1)
        throw DataError("lmds: only " + std::to_string(m) + " distinct landmarks, need at least target_dim + 1");

    Matrix landmarks(m, points.cols());
    for (Eigen::Index i = 0; i < m; ++i) landmarks.row(i) = points.row(out.landmark_indices[static_cast<std::size_t>(i)]);
    Matrix sq(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        sq.col(i) = (landmarks.rowwise() - landmarks.row(i)).rowwise().squaredNorm();
    sq = 0.5 * (sq + sq.transpose());
    sq.diagonal().setZero();

    const auto mds = classical_mds(sq.cwiseSqrt(), params.target_dim);
    out.eigenvalues = mds.eigenvalues;
    out.n_negative = mds.n_negative;
    if (!(mds.eigenvalues(0) > 0.0)) throw DataError("lmds: landmark configuration has collapsed rank");

    // Pseudo-inverse rows v_c / sqrt(lambda_c); zero for non-positive eigenvalues.
    const auto d = static_cast<Eigen::Index>(params.target_dim);
    Matrix pinv = Matrix::Zero(d, m);
    for (Eigen::Index c = 0; c < d; ++c) {
        const double lambda = mds.eigenvalues(c);
        if (lambda > 0.0) pinv.row(c) = mds.coords.col(c).transpose() / lambda;
    }
    const Vector mean_sq = sq.rowwise().mean();

    out.coords.resize(points.rows(), d);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const Vector delta = (landmarks.rowwise() - points.row(i)).rowwise().squaredNorm();
        out.coords.row(i) = (-0.5 * pinv * (delta - mean_sq)).transpose();
    }
    for (Eigen::Index i = 0; i < m; ++i) out.coords.row(out.landmark_indices[static_cast<std::size_t>(i)]) = mds.coords.row(i);
    if (!out.coords.allFinite()) throw NumericError("lmds: non-finite coordinates");
    return out;
}

PcaResult pca_reduce(const Dataset& data, double variance_fraction)
{
    if (!(variance_fraction > 0.0) || variance_fraction > 1.0)
        throw ConfigError("pca_reduce: variance_fraction must be in (0, 1]");
    if (data.size() < 2) throw DataError("pca_reduce: need at least two points");

    PcaResult out;
    out.mean = data.points.colwise().mean().transpose();
    const Matrix centered = data.points.rowwise() - out.mean.transpose();
    Matrix cov = centered.transpose() * centered / static_cast<double>(data.size() - 1);
    cov = 0.5 * (cov + cov.transpose());
    const auto eig = jacobi_eigen(cov);
    out.eigenvalues = eig.values.cwiseMax(0.0);

    const double total = out.eigenvalues.sum();
    const auto n = out.eigenvalues.size();
    Eigen::Index keep = 0;
    if (total <= 0.0) {
        keep = 1;
    } else {
        const double floor = 1e-12 * out.eigenvalues(0);
        Eigen::Index nonzero = 0;
        while (nonzero < n && out.eigenvalues(nonzero) > floor) ++nonzero;
        double cum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            cum += out.eigenvalues(i);
            if (cum >= variance_fraction * total) {
                keep = i + 1;
                break;
            }
        }
        // Rounding can leave the last few ulps of a full-variance request unmet.
        if (keep == 0 || keep > nonzero) keep = std::max<Eigen::Index>(1, nonzero);
    }
    out.n_components = static_cast<std::size_t>(keep);
    out.retained_fraction = total > 0.0 ? out.eigenvalues.head(keep).sum() / total : 1.0;
    out.components = eig.vectors.leftCols(keep);

    out.reduced.points = centered * out.components;
    out.reduced.labels = data.labels;
    out.reduced.label_names = data.label_names;
    out.reduced.aux_labels = data.aux_labels;
    out.reduced.name = data.name;
    for (Eigen::Index c = 0; c < keep; ++c) out.reduced.column_names.push_back("pc" + std::to_string(c + 1));
    return out;
}

Dataset projection_dataset(const Projection& proj, const Dataset& source)
{
    Dataset out;
    out.points = proj.coords;
    out.labels = source.labels;
    out.label_names = source.label_names;
    out.aux_labels = source.aux_labels;
    out.name = source.name;
    for (Eigen::Index c = 0; c < proj.coords.cols(); ++c) out.column_names.push_back("p" + std::to_string(c + 1));
    return out;
}

} // namespace sdr

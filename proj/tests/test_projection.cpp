#include "oracles.hpp"
#include "sdr/errors.hpp"
#include "sdr/projection.hpp"

#include <doctest.h>

using namespace sdr;

namespace {

double max_relative_distance_error(const Matrix& reference, const Matrix& embedded)
{
    const Matrix a = oracle::pairwise(reference);
    const Matrix b = oracle::pairwise(embedded);
    return (a - b).cwiseAbs().maxCoeff() / a.maxCoeff();
}

Matrix rotation_embed_2d(const Matrix& p2, Eigen::Index dims, std::uint64_t seed)
{
    // Random orthonormal frame: intrinsically 2-D data in `dims` dimensions.
    std::mt19937_64 rng(seed);
    const Matrix g = oracle::random_points(static_cast<std::size_t>(dims), 2, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix q = qr.householderQ() * Matrix::Identity(dims, 2);
    return p2 * q.transpose();
}

} // namespace

TEST_CASE("classical MDS of collinear points")
{
    Matrix d(3, 3);
    d << 0, 1, 3, 1, 0, 2, 3, 2, 0;
    const auto r = classical_mds(d, 2);
    CHECK(std::abs(r.eigenvalues(1)) <= 1e-9 * r.eigenvalues(0));
    const Vector x = r.coords.col(0);
    const Vector expected = (Vector(3) << 0, 1, 3).finished().array() - 4.0 / 3.0;
    const double sign = x(2) > x(0) ? 1.0 : -1.0;
    CHECK((sign * x - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("classical MDS of a unit square")
{
    Matrix p(4, 2);
    p << 0, 0, 1, 0, 1, 1, 0, 1;
    const auto r = classical_mds(oracle::pairwise(p), 2);
    CHECK((oracle::pairwise(r.coords) - oracle::pairwise(p)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("classical MDS recovers random 2-D configurations")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        const Matrix p = oracle::random_points(10, 2, rng, 5.0);
        const auto r = classical_mds(oracle::pairwise(p), 2);
        CHECK(max_relative_distance_error(p, r.coords) < 1e-6);
        CHECK(r.coords.colwise().mean().cwiseAbs().maxCoeff() < 1e-9);
        CHECK(r.n_negative == 0);
    }
}

TEST_CASE("classical MDS rejects malformed distance matrices")
{
    Matrix d = Matrix::Zero(3, 3);
    d(0, 1) = 1;
    d(1, 0) = 2;
    CHECK_THROWS_AS(classical_mds(d, 2), DataError);
    d(1, 0) = 1;
    d(0, 0) = 1;
    CHECK_THROWS_AS(classical_mds(d, 2), DataError);
    CHECK_THROWS_AS(classical_mds(Matrix::Zero(3, 2), 1), DataError);
    CHECK_THROWS_AS(classical_mds(Matrix::Zero(3, 3), 4), ConfigError);
}

TEST_CASE("non-Euclidean input clamps negative eigenvalues")
{
    // Triangle inequality violated.
    Matrix d(3, 3);
    d << 0, 1, 5, 1, 0, 1, 5, 1, 0;
    const auto r = classical_mds(d, 2);
    CHECK(r.n_negative >= 1);
    CHECK(r.coords.allFinite());
    CHECK(r.coords.col(1).norm() == 0.0);
}

TEST_CASE("LMDS with every point a landmark preserves distances")
{
    std::mt19937_64 rng(2);
    const Matrix p2 = oracle::random_points(40, 2, rng, 3.0);
    const Matrix p = rotation_embed_2d(p2, 6, 3);
    LmdsParams lp;
    lp.n_landmarks = 40;
    const auto r = lmds(p, lp);
    CHECK(max_relative_distance_error(p, r.coords) < 1e-6);
}

TEST_CASE("LMDS triangulation is exact on intrinsically 2-D data")
{
    std::mt19937_64 rng(5);
    const Matrix p = rotation_embed_2d(oracle::random_points(300, 2, rng, 3.0), 10, 6);
    LmdsParams lp;
    lp.n_landmarks = 20;
    const auto r = lmds(p, lp);
    CHECK(max_relative_distance_error(p, r.coords) < 1e-6);
}

TEST_CASE("a point coincident with a landmark lands on it")
{
    std::mt19937_64 rng(7);
    Matrix p = oracle::random_points(60, 5, rng);
    LmdsParams lp;
    lp.n_landmarks = 10;
    const auto first = lmds(p, lp);
    const int j = first.landmark_indices[3];
    // Append a duplicate of landmark j; MaxMin never picks a duplicate.
    Matrix q(61, 5);
    q.topRows(60) = p;
    q.row(60) = p.row(j);
    const auto r = lmds(q, lp);
    REQUIRE(r.landmark_indices == first.landmark_indices);
    CHECK((r.coords.row(60) - r.coords.row(j)).norm() < 1e-9);
}

TEST_CASE("LMDS separates Gaussian blobs")
{
    std::mt19937_64 rng(8);
    std::vector<Vector> centers;
    for (int c = 0; c < 3; ++c) centers.push_back(Vector::Zero(20));
    centers[1](0) = 10.0;
    centers[2](1) = 10.0;
    const auto [p, truth] = oracle::blobs(centers, 100, 1.0, rng);
    LmdsParams lp;
    lp.n_landmarks = 50;
    const auto r = lmds(p, lp);
    CHECK(oracle::silhouette(r.coords, truth) > 0.5);
}

TEST_CASE("LMDS output follows rigid motions of the input")
{
    std::mt19937_64 rng(9);
    const Matrix p = oracle::random_points(200, 4, rng);
    const Matrix g = oracle::random_points(4, 4, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix rot = qr.householderQ();
    LmdsParams lp;
    lp.n_landmarks = 30;
    const auto a = lmds(p, lp);
    const auto b = lmds(p * rot.transpose(), lp);
    REQUIRE(a.landmark_indices == b.landmark_indices);
    CHECK(oracle::procrustes_residual(a.coords, b.coords) <= 1e-6);
}

TEST_CASE("LMDS determinism, defaults and errors")
{
    std::mt19937_64 rng(10);
    const Matrix p = oracle::random_points(100, 5, rng);
    LmdsParams lp;
    lp.seed = 3;
    CHECK(lmds(p, lp).coords == lmds(p, lp).coords);
    CHECK(lp.resolved_landmarks(100) == 50);
    CHECK(lp.resolved_landmarks(10000) == 100);
    CHECK(lp.resolved_landmarks(20) == 20);
    lp.target_dim = 6;
    CHECK_THROWS_AS(lmds(p, lp), ConfigError);
    CHECK_THROWS_AS(lmds(Matrix::Ones(10, 3), LmdsParams{}), DataError);
}

TEST_CASE("MaxMin landmarks are distinct and spread out")
{
    std::mt19937_64 rng(11);
    const Matrix p = oracle::random_points(100, 3, rng);
    const auto idx = maxmin_landmarks(p, 10, 1);
    CHECK(std::set<int>(idx.begin(), idx.end()).size() == 10);
    // Each new landmark is the farthest point from the ones before it.
    for (std::size_t m = 2; m < idx.size(); ++m) {
        auto min_to_chosen = [&](Eigen::Index i) {
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < m; ++c) d = std::min(d, (p.row(i) - p.row(idx[c])).norm());
            return d;
        };
        const double chosen = min_to_chosen(idx[m]);
        for (Eigen::Index i = 0; i < p.rows(); ++i) CHECK(min_to_chosen(i) <= chosen);
    }
}

TEST_CASE("PCA keeps a single axis of variance")
{
    std::mt19937_64 rng(12);
    Dataset d;
    d.points = Matrix::Zero(50, 4);
    d.points.col(0) = oracle::random_points(50, 1, rng, 3.0);
    d.points.col(1).setConstant(2.0);
    const auto r = pca_reduce(d, 0.9);
    CHECK(r.n_components == 1);
    CHECK(std::abs(std::abs(r.components(0, 0)) - 1.0) < 1e-12);
    CHECK(r.retained_fraction == doctest::Approx(1.0));
}

TEST_CASE("PCA at full variance reconstructs the data")
{
    std::mt19937_64 rng(13);
    Dataset d;
    d.points = oracle::random_points(80, 6, rng);
    d.points.col(5) = d.points.col(0) + d.points.col(1); // rank 5
    const auto r = pca_reduce(d, 1.0);
    CHECK(r.n_components == 5);
    const Matrix back = (r.reduced.points * r.components.transpose()).rowwise() + r.mean.transpose();
    CHECK((back - d.points).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("PCA retained variance reaches the request")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(seed);
        Dataset d;
        d.points = oracle::random_points(100, 8, rng) * oracle::random_points(8, 8, rng);
        for (double f : {0.5, 0.8, 0.95}) {
            const auto r = pca_reduce(d, f);
            CHECK(r.retained_fraction >= f);
            for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
                CHECK(r.eigenvalues(i) >= 0.0);
                if (i > 0) CHECK(r.eigenvalues(i) <= r.eigenvalues(i - 1));
            }
            // Fewest components: dropping the last one falls short.
            const double total = r.eigenvalues.sum();
            if (r.n_components > 1)
                CHECK(r.eigenvalues.head(static_cast<Eigen::Index>(r.n_components) - 1).sum() / total < f);
        }
    }
    Dataset d;
    d.points = Matrix::Ones(5, 2);
    CHECK_THROWS_AS(pca_reduce(d, 0.0), ConfigError);
}

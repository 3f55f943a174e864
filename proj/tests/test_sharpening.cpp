#include "oracles.hpp"
#include "sdr/errors.hpp"
#include "sdr/neighbors.hpp"
#include "sdr/sharpening.hpp"
#include "sdr/synth.hpp"

#include <doctest.h>

using namespace sdr;

namespace {

Dataset blob(std::size_t n, std::size_t d, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Dataset out;
    out.points = oracle::random_points(n, d, rng);
    return out;
}

double mean_pairwise(const Matrix& p)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index j = i + 1; j < p.rows(); ++j) s += (p.row(i) - p.row(j)).norm();
    return s / static_cast<double>(p.rows() * (p.rows() - 1) / 2);
}

} // namespace

TEST_CASE("knn_search orders by distance then index")
{
    Matrix p(5, 1);
    p << 0, 1, -1, 2, 1;
    const auto t = knn_search(p, 3);
    // Point 0: distance 1 to points 1, 2 and 4; lower indices first.
    CHECK(t.index(0, 0) == 1);
    CHECK(t.index(0, 1) == 2);
    CHECK(t.index(0, 2) == 4);
    // Point 1 and 4 coincide.
    CHECK(t.index(1, 0) == 4);
    CHECK(t.sq_dist(1, 0) == 0.0);
    const auto with_self = knn_search(p, 2, true);
    CHECK(with_self.index(3, 0) == 3);
    CHECK_THROWS(knn_search(p, 5));
}

TEST_CASE("zero iterations is the identity")
{
    const auto d = blob(40, 3, 1);
    SharpenParams sp;
    sp.iterations = 0;
    CHECK(sharpen(d, sp).points == d.points);
}

TEST_CASE("step size must lie in (0,1] and k below N")
{
    const auto d = blob(10, 2, 1);
    SharpenParams sp;
    sp.step_size = 0.0;
    CHECK_THROWS_AS(sharpen(d, sp), ConfigError);
    sp.step_size = 1.5;
    CHECK_THROWS_AS(sharpen(d, sp), ConfigError);
    sp.step_size = 0.3;
    sp.k_neighbors = 10;
    CHECK_THROWS_AS(sharpen(d, sp), ConfigError);
    sp.k_neighbors = 0;
    CHECK_THROWS_AS(sharpen(d, sp), ConfigError);
}

TEST_CASE("default k is round(sqrt(N))")
{
    SharpenParams sp;
    CHECK(sp.resolved_k(100) == 10);
    CHECK(sp.resolved_k(1000) == 32);
    CHECK(sp.resolved_k(2) == 1);
}

TEST_CASE("full-step, all-neighbor sharpening contracts a symmetric cloud")
{
    Matrix p(6, 2);
    p << 1, 0, -1, 0, 0, 2, 0, -2, 3, 1, -3, -1;
    Dataset d;
    d.points = p;
    SharpenParams sp;
    sp.step_size = 1.0;
    sp.k_neighbors = 5;
    sp.iterations = 1;
    const auto out = sharpen(d, sp);
    CHECK(mean_pairwise(out.points) < mean_pairwise(p));
    // With k = N-1 and alpha = 1 each point lands on the mean of the others.
    for (Eigen::Index i = 0; i < 6; ++i) {
        const Eigen::RowVector2d others = (p.colwise().sum() - p.row(i)) / 5.0;
        CHECK((out.points.row(i) - others).norm() < 1e-12);
    }
    // The common centroid stays put.
    CHECK(out.points.colwise().mean().norm() < 1e-12);
}

TEST_CASE("matches a reference mean-shift loop")
{
    const auto d = blob(500, 10, 2);
    SharpenParams sp;
    sp.k_neighbors = 30;
    sp.step_size = 0.3;
    sp.iterations = 10;
    const auto out = sharpen(d, sp);
    const Matrix ref = oracle::mean_shift(d.points, 30, 0.3, 10);
    CHECK((out.points - ref).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(knn_shift_residual(out.points, 30) < knn_shift_residual(d.points, 30));
}

TEST_CASE("kNN shift residual is non-increasing on a Gaussian blob")
{
    for (std::uint64_t seed : {3, 4, 5}) {
        const auto d = blob(300, 5, seed);
        SharpenParams sp;
        const auto k = sp.resolved_k(d.size());
        Matrix x = d.points;
        double prev = knn_shift_residual(x, k);
        for (std::size_t t = 0; t < sp.iterations; ++t) {
            x = sharpen_step(x, k, sp.step_size);
            const double now = knn_shift_residual(x, k);
            CHECK(now <= prev);
            prev = now;
        }
    }
}

TEST_CASE("shape, labels and determinism are preserved")
{
    SynthSpec s;
    s.n_points = 400;
    s.seed = 6;
    const auto d = generate(s);
    const auto a = sharpen(d, {});
    const auto b = sharpen(d, {});
    CHECK(a.points == b.points);
    CHECK(a.dims() == d.dims());
    CHECK(*a.labels == *d.labels);
    CHECK(a.aux_labels == d.aux_labels);
}

TEST_CASE("well separated clusters keep their nearest true center")
{
    SynthSpec s;
    s.n_points = 1000;
    s.seed = 8;
    const auto out = generate_detailed(s);
    SharpenParams sp;
    sp.k_neighbors = 50; // below the smallest class (200)
    const auto sharp = sharpen(out.data, sp);
    auto nearest = [&](const Matrix& p, Eigen::Index i) {
        Eigen::Index best = 0;
        (out.centers.rowwise() - p.row(i)).rowwise().squaredNorm().minCoeff(&best);
        return best;
    };
    for (Eigen::Index i = 0; i < sharp.points.rows(); ++i) CHECK(nearest(sharp.points, i) == nearest(out.data.points, i));
}

TEST_CASE("non-finite coordinates are a numeric failure")
{
    auto d = blob(2, 1, 1);
    d.points(0, 0) = 1e308;
    d.points(1, 0) = -1e308;
    SharpenParams sp;
    sp.k_neighbors = 1;
    CHECK_THROWS_AS(sharpen(d, sp), NumericError);
}

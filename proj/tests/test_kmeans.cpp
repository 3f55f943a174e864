#include "oracles.hpp"
#include "sdr/clustering.hpp"
#include "sdr/errors.hpp"
#include "sdr/metrics.hpp"

#include <doctest.h>

using namespace sdr;

namespace {

const KmeansInfo& info(const ClusteringResult& r) { return std::get<KmeansInfo>(r.metadata); }

} // namespace

TEST_CASE("two obvious pairs")
{
    Matrix p(4, 2);
    p << 0, 0, 0, 1, 10, 0, 10, 1;
    const auto r = kmeans(p, {.k = 2, .replicates = 10, .max_iter = 100, .seed = 1});
    CHECK(oracle::canonical(r.labels) == LabelVector{0, 0, 1, 1});
    CHECK(info(r).sse == doctest::Approx(1.0));
    const auto best = oracle::exhaustive_kmeans(p, 2);
    CHECK(best.sse == doctest::Approx(1.0));
    CHECK(best.labels == LabelVector{0, 0, 1, 1});
}

TEST_CASE("transfers escape a Lloyd fixed point")
{
    // Point 1 is nearest its own centroid, yet moving it lowers the SSE.
    Matrix p(7, 2);
    p << -1.45545, 1.6738, -0.0300574, -0.112632, 0.428023, -1.79909, 1.42424, 0.116692, 1.38788, 0.782909, 1.59321,
        -0.491376, -1.4734, -1.23945;
    const auto best = oracle::exhaustive_kmeans(p, 3);
    const auto r = kmeans(p, {.k = 3, .replicates = 1, .max_iter = 100, .seed = 13});
    CHECK(info(r).sse == doctest::Approx(best.sse).epsilon(1e-12));
    CHECK(oracle::canonical(r.labels) == best.labels);
}

TEST_CASE("k = N and k = 1")
{
    std::mt19937_64 rng(2);
    const Matrix p = oracle::random_points(12, 3, rng);
    const auto all = kmeans(p, {.k = 12, .replicates = 3, .max_iter = 100, .seed = 1});
    CHECK(std::set<int>(all.labels.begin(), all.labels.end()).size() == 12);
    CHECK(info(all).sse == doctest::Approx(0.0));

    const auto one = kmeans(p, {.k = 1, .replicates = 3, .max_iter = 100, .seed = 1});
    const Eigen::RowVectorXd mean = p.colwise().mean();
    CHECK((info(one).centroids.row(0) - mean).norm() < 1e-12);
    const double total_var = (p.rowwise() - mean).squaredNorm() / 12.0;
    CHECK(info(one).sse == doctest::Approx(total_var * 12.0).epsilon(1e-12));
}

TEST_CASE("small instances reach the exhaustive minimum SSE")
{
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        std::mt19937_64 rng(seed);
        const std::size_t n = 5 + seed % 4; // 5..8 points
        const int k = 2 + static_cast<int>(seed % 3);
        const Matrix p = oracle::random_points(n, 2, rng);
        const auto best = oracle::exhaustive_kmeans(p, k);
        const auto r = kmeans(p, {.k = static_cast<std::size_t>(k), .replicates = 10, .max_iter = 100, .seed = seed});
        CAPTURE(seed);
        CHECK(info(r).sse == doctest::Approx(best.sse).epsilon(1e-9));
        if (best.n_optimal == 1) CHECK(oracle::canonical(r.labels) == best.labels);
    }
}

TEST_CASE("SSE never increases within a replicate")
{
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        std::mt19937_64 rng(seed);
        const Matrix p = oracle::random_points(60, 3, rng);
        const auto r = kmeans(p, {.k = 4, .replicates = 3, .max_iter = 100, .seed = seed});
        for (const auto& h : info(r).replicate_histories)
            for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] <= h[i - 1] * (1 + 1e-12));
        const auto& reps = info(r).replicate_sse;
        CHECK(info(r).sse == *std::min_element(reps.begin(), reps.end()));
        CHECK(info(r).sse == doctest::Approx(sum_of_squared_errors(p, r.labels, info(r).centroids)));
    }
}

TEST_CASE("every cluster is non-empty even with duplicates")
{
    Matrix p = Matrix::Zero(10, 2);
    p.row(9) << 5, 5;
    const auto r = kmeans(p, {.k = 3, .replicates = 2, .max_iter = 50, .seed = 4});
    std::set<int> used(r.labels.begin(), r.labels.end());
    CHECK(used.size() == 3);
    CHECK(r.n_clusters == 3);
}

TEST_CASE("permuting rows permutes labels")
{
    std::mt19937_64 rng(5);
    std::vector<Vector> centers{Vector::Zero(2), Vector::Constant(2, 10.0), (Vector(2) << 10, -10).finished()};
    const auto [p, truth] = oracle::blobs(centers, 30, 1.0, rng);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(p.rows()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix q(p.rows(), p.cols());
    for (Eigen::Index i = 0; i < p.rows(); ++i) q.row(i) = p.row(perm[static_cast<std::size_t>(i)]);
    const auto a = kmeans(p, {.k = 3, .replicates = 10, .max_iter = 100, .seed = 1});
    const auto b = kmeans(q, {.k = 3, .replicates = 10, .max_iter = 100, .seed = 1});
    LabelVector back(a.labels.size());
    for (std::size_t i = 0; i < perm.size(); ++i) back[static_cast<std::size_t>(perm[i])] = b.labels[i];
    CHECK(accuracy(back, a.labels) == 1.0);
}

TEST_CASE("same seed, same labels; bad parameters rejected")
{
    std::mt19937_64 rng(6);
    const Matrix p = oracle::random_points(100, 2, rng);
    const KmeansParams kp{.k = 5, .replicates = 4, .max_iter = 100, .seed = 9};
    CHECK(kmeans(p, kp).labels == kmeans(p, kp).labels);
    CHECK_THROWS_AS(kmeans(p, {.k = 0, .replicates = 1, .max_iter = 1, .seed = 0}), ConfigError);
    CHECK_THROWS_AS(kmeans(p, {.k = 101, .replicates = 1, .max_iter = 1, .seed = 0}), ConfigError);
    CHECK_THROWS_AS(kmeans(p, {.k = 2, .replicates = 0, .max_iter = 1, .seed = 0}), ConfigError);
}

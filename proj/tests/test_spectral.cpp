#include "oracles.hpp"
#include "sdr/clustering.hpp"
#include "sdr/errors.hpp"
#include "sdr/linalg.hpp"
#include "sdr/metrics.hpp"

#include <doctest.h>

using namespace sdr;

TEST_CASE("graph is the symmetrized kNN relation")
{
    Matrix p(4, 1);
    p << 0, 1, 3, 10;
    const auto g = knn_graph(p, 1);
    // 0<->1, 2->1, 3->2.
    CHECK(g[0] == std::vector<int>{1});
    CHECK(g[1] == std::vector<int>{0, 2});
    CHECK(g[2] == std::vector<int>{1, 3});
    CHECK(g[3] == std::vector<int>{2});
    CHECK(connected_components(g) == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("normalized Laplacian spectrum lies in [0, 2]")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        const Matrix p = oracle::random_points(40 + seed, 3, rng);
        const auto lap = normalized_laplacian(knn_graph(p, 1 + seed % 5));
        CHECK((lap - lap.transpose()).cwiseAbs().maxCoeff() == 0.0);
        const auto e = jacobi_eigen(lap);
        CHECK(e.values.maxCoeff() <= 2.0 + 1e-9);
        CHECK(e.values.minCoeff() >= -1e-9);
    }
    // A bipartite graph reaches the upper end.
    const std::vector<std::vector<int>> path{{1}, {0, 2}, {1}};
    CHECK(jacobi_eigen(normalized_laplacian(path)).values(0) == doctest::Approx(2.0));
}

TEST_CASE("disconnected components are recovered exactly")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(seed);
        std::vector<Vector> centers{Vector::Zero(3), Vector::Constant(3, 50.0), Vector::Constant(3, -50.0)};
        const std::size_t k = 2 + seed % 2;
        centers.resize(k);
        const auto [p, truth] = oracle::blobs(centers, 20 + seed, 1.0, rng);
        const auto comp = connected_components(knn_graph(p, 4));
        REQUIRE(oracle::canonical(comp) == truth);
        const auto r = spectral(p, {.k = k, .knn = 4, .replicates = 10, .seed = seed});
        CHECK(oracle::canonical(r.labels) == truth);
        const auto& info = std::get<SpectralInfo>(r.metadata);
        CHECK(info.n_components == k);
        for (Eigen::Index i = 0; i < info.eigenvalues.size(); ++i) CHECK(std::abs(info.eigenvalues(i)) < 1e-9);
    }
}

TEST_CASE("k = 1 is a single cluster")
{
    std::mt19937_64 rng(2);
    std::vector<Vector> centers{Vector::Zero(2), Vector::Constant(2, 50.0)};
    const auto [p, truth] = oracle::blobs(centers, 10, 1.0, rng);
    const auto r = spectral(p, {.k = 1, .knn = std::nullopt, .replicates = 10, .seed = 0});
    CHECK(r.labels == LabelVector(20, 0));
}

TEST_CASE("two blobs split at the default neighbor count")
{
    std::mt19937_64 rng(3);
    Vector far = Vector::Zero(5);
    far(0) = 10.0;
    const auto [p, truth] = oracle::blobs({Vector::Zero(5), far}, 25, 1.0, rng);
    CHECK(log_n_rule(50) == 4);
    const auto comp = connected_components(knn_graph(p, 4));
    CHECK(*std::max_element(comp.begin(), comp.end()) == 1);
    const auto r = spectral(p, {.k = 2, .knn = std::nullopt, .replicates = 10, .seed = 1});
    CHECK(oracle::canonical(r.labels) == truth);
}

TEST_CASE("large connected graphs use the iterative solver")
{
    // One connected graph bigger than the dense limit: three touching blobs.
    std::mt19937_64 rng(4);
    std::vector<Vector> centers{Vector::Zero(2), (Vector(2) << 4, 0).finished(), (Vector(2) << 2, 4).finished()};
    const auto [p, truth] = oracle::blobs(centers, 150, 0.6, rng);
    const auto r = spectral(p, {.k = 3, .knn = 12, .replicates = 10, .seed = 1});
    const auto& info = std::get<SpectralInfo>(r.metadata);
    CHECK(info.solver_converged);
    CHECK(info.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(accuracy(r.labels, truth) > 0.95);
}

TEST_CASE("spectral parameter checks")
{
    const Matrix p = Matrix::Random(5, 2);
    CHECK_THROWS_AS(spectral(p, {.k = 6, .knn = std::nullopt, .replicates = 1, .seed = 0}), ConfigError);
    CHECK_THROWS_AS(spectral(p, {.k = 2, .knn = 0, .replicates = 1, .seed = 0}), ConfigError);
}

#include "sdr/clustering.hpp"

#include "sdr/errors.hpp"
#include "sdr/linalg.hpp"
#include "sdr/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sdr {

namespace {

// Components up to this size are decomposed densely with Jacobi.
constexpr std::size_t dense_limit = 200;

struct EigenPiece {
    double value;
    int component;
    std::size_t order;
    Vector vector; // over the component's vertices
};

} // namespace

std::vector<std::vector<int>> knn_graph(const Matrix& points, std::size_t knn)
{
    const auto n = static_cast<std::size_t>(points.rows());
    std::vector<std::vector<int>> adj(n);
    if (n < 2) return adj;
    const auto table = knn_search(points, std::min(knn, n - 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < table.k; ++j) {
            const int t = table.index(i, j);
            adj[i].push_back(t);
            adj[static_cast<std::size_t>(t)].push_back(static_cast<int>(i));
        }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

Matrix normalized_laplacian(const std::vector<std::vector<int>>& graph)
{
    const auto n = static_cast<Eigen::Index>(graph.size());
    Matrix lap = Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto di = static_cast<double>(graph[static_cast<std::size_t>(i)].size());
        if (di == 0.0) {
            lap(i, i) = 0.0;
            continue;
        }
        for (int j : graph[static_cast<std::size_t>(i)]) {
            const auto dj = static_cast<double>(graph[static_cast<std::size_t>(j)].size());
            lap(i, j) -= 1.0 / std::sqrt(di * dj);
        }
    }
    return lap;
}

std::vector<int> connected_components(const std::vector<std::vector<int>>& graph)
{
    std::vector<int> comp(graph.size(), -1);
    int next = 0;
    std::vector<int> stack;
    for (std::size_t s = 0; s < graph.size(); ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        stack.push_back(static_cast<int>(s));
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : graph[static_cast<std::size_t>(v)])
                if (comp[static_cast<std::size_t>(w)] < 0) {
                    comp[static_cast<std::size_t>(w)] = next;
                    stack.push_back(w);
                }
        }
        ++next;
    }
    return comp;
}

ClusteringResult spectral(const Matrix& points, const SpectralParams& params)
{
    const auto n = static_cast<std::size_t>(points.rows());
    if (n == 0) throw DataError("spectral: empty input");
    if (params.k < 1 || params.k > n) throw ConfigError("spectral: k must be in [1, N]");

    SpectralInfo info;
    info.knn = params.knn.value_or(log_n_rule(n));
    if (info.knn < 1) throw ConfigError("spectral: knn must be >= 1");

    ClusteringResult out;
    out.method = Method::spectral;
    out.n_clusters = static_cast<int>(params.k);
    if (params.k == 1 || n == 1) {
        out.labels.assign(n, 0);
        out.n_clusters = 1;
        out.metadata = std::move(info);
        return out;
    }

    const auto graph = knn_graph(points, info.knn);
    const auto comp = connected_components(graph);
    info.n_components = static_cast<std::size_t>(*std::max_element(comp.begin(), comp.end()) + 1);
    if (info.n_components > params.k)
        info.warning = "kNN graph has " + std::to_string(info.n_components) + " connected components, more than k=" +
                       std::to_string(params.k) + "; clusters follow components";

    // The Laplacian is block diagonal over components: decompose each block.
    std::vector<std::vector<int>> members(info.n_components);
    std::vector<int> local(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& m = members[static_cast<std::size_t>(comp[i])];
        local[i] = static_cast<int>(m.size());
        m.push_back(static_cast<int>(i));
    }

    std::vector<EigenPiece> pieces;
    for (std::size_t c = 0; c < info.n_components; ++c) {
        const auto& verts = members[c];
        const std::size_t s = verts.size();
        std::vector<std::vector<int>> sub(s);
        for (std::size_t v = 0; v < s; ++v)
            for (int w : graph[static_cast<std::size_t>(verts[v])]) sub[v].push_back(local[static_cast<std::size_t>(w)]);
        const std::size_t want = std::min(params.k, s);

        if (s <= dense_limit) {
            const auto eig = jacobi_eigen(normalized_laplacian(sub));
            for (std::size_t t = 0; t < want; ++t) {
                const auto col = static_cast<Eigen::Index>(s - 1 - t);
                pieces.push_back({eig.values(col), static_cast<int>(c), t, eig.vectors.col(col)});
            }
            continue;
        }

        std::vector<double> inv_sqrt_deg(s);
        for (std::size_t v = 0; v < s; ++v) inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(sub[v].size()));
        const LinearOperator op = [&](const Vector& x, Vector& y) {
            y.resize(x.size());
            for (std::size_t v = 0; v < s; ++v) {
                double acc = 0.0;
                for (int w : sub[v]) acc += inv_sqrt_deg[static_cast<std::size_t>(w)] * x(w);
                y(static_cast<Eigen::Index>(v)) = inv_sqrt_deg[v] * acc;
            }
        };
        const auto lz = lanczos_largest(op, s, want, params.seed + c);
        if (!lz.converged) info.solver_converged = false;
        for (std::size_t t = 0; t < want; ++t) {
            const auto col = static_cast<Eigen::Index>(t);
            pieces.push_back({1.0 - lz.values(col), static_cast<int>(c), t, lz.vectors.col(col)});
        }
    }

    // Numerically-zero eigenvalues tie; keep component order among them.
    auto key = [](double v) { return v < 1e-10 ? 0.0 : v; };
    std::stable_sort(pieces.begin(), pieces.end(), [&](const EigenPiece& a, const EigenPiece& b) {
        const double ka = key(a.value);
        const double kb = key(b.value);
        if (ka != kb) return ka < kb;
        if (a.component != b.component) return a.component < b.component;
        return a.order < b.order;
    });

    const auto k = static_cast<Eigen::Index>(params.k);
    Matrix embedding = Matrix::Zero(static_cast<Eigen::Index>(n), k);
    info.eigenvalues.resize(k);
    for (Eigen::Index e = 0; e < k && static_cast<std::size_t>(e) < pieces.size(); ++e) {
        const auto& p = pieces[static_cast<std::size_t>(e)];
        info.eigenvalues(e) = p.value;
        const auto& verts = members[static_cast<std::size_t>(p.component)];
        for (std::size_t v = 0; v < verts.size(); ++v) embedding(verts[v], e) = p.vector(static_cast<Eigen::Index>(v));
    }
    for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 0.0) embedding.row(i) /= norm;
    }

    KmeansParams km;
    km.k = params.k;
    km.replicates = params.replicates;
    km.seed = params.seed;
    auto clustered = kmeans(embedding, km);
    out.labels = std::move(clustered.labels);
    out.metadata = std::move(info);
    return out;
}

} // namespace sdr

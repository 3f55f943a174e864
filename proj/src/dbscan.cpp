#include "sdr/clustering.hpp"

#include "sdr/errors.hpp"
#include "sdr/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sdr {

std::size_t log_n_rule(std::size_t n_points)
{
    if (n_points < 1) return 2;
    const auto r = std::llround(std::log(static_cast<double>(n_points)));
    return static_cast<std::size_t>(std::max<long long>(2, r));
}

std::size_t knee_index(const std::vector<double>& v)
{
    if (v.empty()) throw ConfigError("knee_index: empty curve");
    const std::size_t n = v.size();
    if (n < 3) return 0;
    const double dx = static_cast<double>(n - 1);
    const double dy = v.back() - v.front();
    // Perpendicular distance up to the constant chord length.
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(dy * static_cast<double>(i) - dx * (v[i] - v.front()));
        if (d > best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

AutoParams dbscan_auto_params(const Matrix& points)
{
    const auto n = static_cast<std::size_t>(points.rows());
    if (n < 3) throw ConfigError("dbscan_auto_params: need N >= 3");
    AutoParams out;
    out.min_pts = std::min(log_n_rule(n), n);
    const auto table = knn_search(points, out.min_pts, /*include_self=*/true);
    out.k_distances.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.k_distances[i] = std::sqrt(table.sq_dist(i, out.min_pts - 1));
    std::sort(out.k_distances.begin(), out.k_distances.end());
    out.knee_index = knee_index(out.k_distances);
    out.eps = out.k_distances[out.knee_index];
    if (!(out.eps > 0.0)) {
        // Duplicate-heavy data: fall back to the smallest positive k-distance.
        auto pos = std::find_if(out.k_distances.begin(), out.k_distances.end(), [](double d) { return d > 0.0; });
        out.eps = pos != out.k_distances.end() ? *pos : std::numeric_limits<double>::min();
    }
    return out;
}

ClusteringResult dbscan(const Matrix& points, const DbscanParams& params)
{
    const auto n = static_cast<std::size_t>(points.rows());
    if (n == 0) throw DataError("dbscan: empty input");
    if (!(params.eps > 0.0)) throw ConfigError("dbscan: eps must be > 0");
    if (params.min_pts < 1) throw ConfigError("dbscan: min_pts must be >= 1");

    // Compared on squared distances; the ordering is the same as on distances.
    const double eps2 = params.eps * params.eps;
    const Matrix cols = points.transpose();
    const auto dims = cols.rows();
    auto within = [&](std::size_t i, std::size_t j) {
        const double* a = cols.data() + static_cast<Eigen::Index>(i) * dims;
        const double* b = cols.data() + static_cast<Eigen::Index>(j) * dims;
        double d = 0.0;
        for (Eigen::Index c = 0; c < dims; ++c) {
            const double t = a[c] - b[c];
            d += t * t;
        }
        return d <= eps2;
    };

    std::vector<bool> core(n, false);
    {
        std::vector<std::size_t> count(n, 1); // the point itself
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (within(i, j)) {
                    ++count[i];
                    ++count[j];
                }
        for (std::size_t i = 0; i < n; ++i) core[i] = count[i] >= params.min_pts;
    }

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!core[j] || !within(i, j)) continue;
            const int ri = root(static_cast<int>(i));
            const int rj = root(static_cast<int>(j));
            if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
        }
    }

    ClusteringResult out;
    out.method = Method::dbscan;
    out.labels.assign(n, -1);
    std::vector<int> id_of_root(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i]) continue;
        auto& id = id_of_root[static_cast<std::size_t>(root(static_cast<int>(i)))];
        if (id < 0) id = next++;
        out.labels[i] = id;
    }
    DbscanInfo info;
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (core[j] && within(i, j)) {
                out.labels[i] = out.labels[j];
                break;
            }
        if (out.labels[i] < 0) ++info.n_noise;
    }
    out.n_clusters = next;
    info.eps = params.eps;
    info.min_pts = params.min_pts;
    info.core = std::move(core);
    out.metadata = std::move(info);
    return out;
}

} // namespace sdr

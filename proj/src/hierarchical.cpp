#include "sdr/clustering.hpp"

#include "sdr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sdr {

namespace {

class CondensedMatrix {
public:
    explicit CondensedMatrix(std::size_t n) : n_(n), data_(n * (n - 1) / 2) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[offset(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[offset(i, j)]; }

private:
    [[nodiscard]] std::size_t offset(std::size_t i, std::size_t j) const
    {
        if (i > j) std::swap(i, j);
        return i * n_ - i * (i + 1) / 2 + (j - i - 1);
    }

    std::size_t n_;
    std::vector<double> data_;
};

int find_root(std::vector<int>& parent, int x)
{
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

} // namespace

LabelVector cut_tree(const std::vector<Merge>& merges, std::size_t n_points, std::size_t k)
{
    if (k < 1 || k > n_points) throw ConfigError("cut_tree: k must be in [1, N]");
    std::vector<int> parent(n_points);
    std::iota(parent.begin(), parent.end(), 0);
    const std::size_t apply = std::min(merges.size(), n_points - k);
    for (std::size_t m = 0; m < apply; ++m) {
        const int ra = find_root(parent, merges[m].a);
        const int rb = find_root(parent, merges[m].b);
        if (ra == rb) throw NumericError("cut_tree: inconsistent merge list");
        parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
    }
    LabelVector labels(n_points, -1);
    std::vector<int> id_of_root(n_points, -1);
    int next = 0;
    for (std::size_t i = 0; i < n_points; ++i) {
        const int r = find_root(parent, static_cast<int>(i));
        auto& id = id_of_root[static_cast<std::size_t>(r)];
        if (id < 0) id = next++;
        labels[i] = id;
    }
    return labels;
}

ClusteringResult hc(const Matrix& points, std::size_t k, Linkage linkage)
{
    const auto n = static_cast<std::size_t>(points.rows());
    if (n == 0) throw DataError("hc: empty input");
    if (k < 1 || k > n) throw ConfigError("hc: k must be in [1, N]");

    HcInfo info;
    if (n > 1) {
        const Matrix cols = points.transpose();
        CondensedMatrix dist(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                dist(i, j) = (cols.col(static_cast<Eigen::Index>(i)) - cols.col(static_cast<Eigen::Index>(j))).norm();

        // Active slots as an ascending linked list; slot s always contains point s.
        constexpr int none = -1;
        std::vector<int> succ(n + 1);
        std::vector<int> pred(n + 1);
        for (std::size_t i = 0; i < n; ++i) {
            succ[i] = static_cast<int>(i + 1);
            pred[i] = static_cast<int>(i) - 1;
        }
        int head = 0;
        const int tail = static_cast<int>(n);
        std::vector<std::size_t> size(n, 1);
        std::vector<int> chain;
        chain.reserve(n);

        auto deactivate = [&](int s) {
            const int p = pred[static_cast<std::size_t>(s)];
            const int q = succ[static_cast<std::size_t>(s)];
            if (p == none)
                head = q;
            else
                succ[static_cast<std::size_t>(p)] = q;
            if (q != tail) pred[static_cast<std::size_t>(q)] = p;
        };

        while (info.merges.size() + 1 < n) {
            if (chain.empty()) chain.push_back(head);
            const int a = chain.back();
            int b = none;
            double best = std::numeric_limits<double>::infinity();
            if (chain.size() >= 2) {
                b = chain[chain.size() - 2];
                best = dist(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            }
            for (int x = head; x != tail; x = succ[static_cast<std::size_t>(x)]) {
                if (x == a) continue;
                const double d = dist(static_cast<std::size_t>(a), static_cast<std::size_t>(x));
                if (d < best) {
                    best = d;
                    b = x;
                }
            }
            if (chain.size() < 2 || b != chain[chain.size() - 2]) {
                chain.push_back(b);
                continue;
            }
            chain.pop_back();
            chain.pop_back();

            const auto ua = static_cast<std::size_t>(a);
            const auto ub = static_cast<std::size_t>(b);
            const double dab = best;
            const std::size_t keep = std::min(ua, ub);
            const std::size_t drop = std::max(ua, ub);
            for (int x = head; x != tail; x = succ[static_cast<std::size_t>(x)]) {
                const auto ux = static_cast<std::size_t>(x);
                if (ux == ua || ux == ub) continue;
                const double dax = dist(ua, ux);
                const double dbx = dist(ub, ux);
                double d = 0.0;
                if (linkage == Linkage::complete) {
                    d = std::max(dax, dbx);
                } else {
                    const auto na = static_cast<double>(size[ua]);
                    const auto nb = static_cast<double>(size[ub]);
                    const auto nx = static_cast<double>(size[ux]);
                    const double num = (na + nx) * dax * dax + (nb + nx) * dbx * dbx - nx * dab * dab;
                    d = std::sqrt(std::max(0.0, num / (na + nb + nx)));
                }
                dist(keep, ux) = d;
            }
            size[keep] = size[ua] + size[ub];
            deactivate(static_cast<int>(drop));
            info.merges.push_back({static_cast<int>(keep), static_cast<int>(drop), dab, size[keep]});
        }
        std::stable_sort(info.merges.begin(), info.merges.end(),
                         [](const Merge& x, const Merge& y) { return x.distance < y.distance; });
    }

    ClusteringResult out;
    out.method = linkage == Linkage::complete ? Method::hc_complete : Method::hc_ward;
    out.labels = cut_tree(info.merges, n, k);
    out.n_clusters = static_cast<int>(k);
    out.metadata = std::move(info);
    return out;
}

} // namespace sdr

#include "sdr/clustering.hpp"

#include "sdr/errors.hpp"

#include <limits>
#include <random>

namespace sdr {

namespace {

struct RunResult {
    LabelVector labels;
    Matrix centroids;
    double sse = 0.0;
    std::vector<double> history;
    std::size_t iterations = 0;
};

inline double sq_dist(const Matrix& cols, Eigen::Index i, const Matrix& centers, Eigen::Index c)
{
    return (cols.col(i) - centers.col(c)).squaredNorm();
}

// Points and centroids are held column-per-item for contiguous access.
Matrix plus_plus_seed(const Matrix& cols, std::size_t k, std::mt19937_64& rng)
{
    const auto n = cols.cols();
    Matrix centers(cols.rows(), static_cast<Eigen::Index>(k));
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    Eigen::Index pick = first(rng);
    std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < k; ++c) {
        centers.col(static_cast<Eigen::Index>(c)) = cols.col(pick);
        taken[static_cast<std::size_t>(pick)] = true;
        if (c + 1 == k) break;
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            auto& d = d2[static_cast<std::size_t>(i)];
            d = std::min(d, (cols.col(i) - cols.col(pick)).squaredNorm());
            total += d;
        }
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            const double target = u(rng);
            double acc = 0.0;
            pick = -1;
            Eigen::Index last_positive = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double d = d2[static_cast<std::size_t>(i)];
                if (d <= 0.0) continue;
                last_positive = i;
                acc += d;
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) pick = last_positive;
        } else {
            // Every point sits on a chosen center; take the first unused index.
            pick = 0;
            while (pick < n && taken[static_cast<std::size_t>(pick)]) ++pick;
            if (pick == n) pick = 0;
        }
    }
    return centers;
}

double assign(const Matrix& cols, const Matrix& centers, LabelVector& labels, std::vector<double>& cost)
{
    const auto n = cols.cols();
    const auto k = centers.cols();
    double sse = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = 0;
        double best_d = sq_dist(cols, i, centers, 0);
        for (Eigen::Index c = 1; c < k; ++c) {
            const double d = sq_dist(cols, i, centers, c);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        cost[static_cast<std::size_t>(i)] = best_d;
        sse += best_d;
    }
    return sse;
}

// Moves the farthest point of a multi-member cluster into each empty cluster.
double repair_empty(const Matrix& cols, Matrix& centers, LabelVector& labels, std::vector<double>& cost, double sse)
{
    const auto k = static_cast<std::size_t>(centers.cols());
    std::vector<std::size_t> sizes(k, 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] > 0) continue;
        std::size_t far = labels.size();
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (sizes[static_cast<std::size_t>(labels[i])] < 2) continue;
            if (far == labels.size() || cost[i] > cost[far]) far = i;
        }
        if (far == labels.size()) break; // fewer distinct points than clusters
        --sizes[static_cast<std::size_t>(labels[far])];
        labels[far] = static_cast<int>(c);
        ++sizes[c];
        sse -= cost[far];
        cost[far] = 0.0;
        centers.col(static_cast<Eigen::Index>(c)) = cols.col(static_cast<Eigen::Index>(far));
    }
    return sse;
}

void update(const Matrix& cols, const LabelVector& labels, Matrix& centers)
{
    const auto k = centers.cols();
    Matrix sums = Matrix::Zero(cols.rows(), k);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        sums.col(labels[i]) += cols.col(static_cast<Eigen::Index>(i));
        ++counts[static_cast<std::size_t>(labels[i])];
    }
    for (Eigen::Index c = 0; c < k; ++c)
        if (counts[static_cast<std::size_t>(c)] > 0) centers.col(c) = sums.col(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
}

double total_sse(const Matrix& cols, const Matrix& centers, const LabelVector& labels)
{
    double sse = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) sse += sq_dist(cols, static_cast<Eigen::Index>(i), centers, labels[i]);
    return sse;
}

// Single-point transfers after Lloyd has settled. Moving x from a to b changes
// the SSE by n_b/(n_b+1)|x-c_b|^2 - n_a/(n_a-1)|x-c_a|^2, which can be negative
// even when x is already nearest to c_a. A transfer-stable partition is also a
// Lloyd fixed point.
void transfer_sweeps(const Matrix& cols, Matrix& centers, LabelVector& labels, std::vector<double>& history,
                     std::size_t max_sweeps)
{
    const auto k = static_cast<std::size_t>(centers.cols());
    std::vector<double> sizes(k, 0.0);
    for (int l : labels) sizes[static_cast<std::size_t>(l)] += 1.0;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool moved = false;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const auto a = static_cast<std::size_t>(labels[i]);
            if (sizes[a] < 2.0) continue;
            const auto x = cols.col(static_cast<Eigen::Index>(i));
            const double out = sizes[a] / (sizes[a] - 1.0) * (x - centers.col(static_cast<Eigen::Index>(a))).squaredNorm();
            std::size_t best = a;
            double best_in = out;
            for (std::size_t b = 0; b < k; ++b) {
                if (b == a) continue;
                const double in = sizes[b] / (sizes[b] + 1.0) * (x - centers.col(static_cast<Eigen::Index>(b))).squaredNorm();
                if (in < best_in) {
                    best_in = in;
                    best = b;
                }
            }
            if (best == a || out - best_in <= 1e-12 * out) continue;
            auto ca = centers.col(static_cast<Eigen::Index>(a));
            auto cb = centers.col(static_cast<Eigen::Index>(best));
            ca = (ca * sizes[a] - x) / (sizes[a] - 1.0);
            cb = (cb * sizes[best] + x) / (sizes[best] + 1.0);
            sizes[a] -= 1.0;
            sizes[best] += 1.0;
            labels[i] = static_cast<int>(best);
            moved = true;
        }
        if (!moved) break;
        update(cols, labels, centers);
        history.push_back(std::min(total_sse(cols, centers, labels), history.back()));
    }
}

RunResult lloyd(const Matrix& cols, std::size_t k, std::size_t max_iter, std::mt19937_64& rng)
{
    RunResult run;
    Matrix centers = plus_plus_seed(cols, k, rng);
    const auto n = static_cast<std::size_t>(cols.cols());
    run.labels.assign(n, -1);
    std::vector<double> cost(n, 0.0);
    LabelVector previous;
    for (std::size_t it = 0; it < max_iter; ++it) {
        double sse = assign(cols, centers, run.labels, cost);
        sse = repair_empty(cols, centers, run.labels, cost, sse);
        run.history.push_back(sse);
        run.iterations = it + 1;
        if (run.labels == previous) break;
        previous = run.labels;
        update(cols, run.labels, centers);
    }
    update(cols, run.labels, centers);
    transfer_sweeps(cols, centers, run.labels, run.history, max_iter);
    run.sse = std::min(total_sse(cols, centers, run.labels), run.history.back());
    run.history.push_back(run.sse);
    run.centroids = centers.transpose();
    return run;
}

} // namespace

double sum_of_squared_errors(const Matrix& points, const LabelVector& labels, const Matrix& centroids)
{
    double sse = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        sse += (points.row(static_cast<Eigen::Index>(i)) - centroids.row(labels[i])).squaredNorm();
    return sse;
}

ClusteringResult kmeans(const Matrix& points, const KmeansParams& params)
{
    const auto n = static_cast<std::size_t>(points.rows());
    if (n == 0) throw DataError("kmeans: empty input");
    if (params.k < 1 || params.k > n) throw ConfigError("kmeans: k must be in [1, N]");
    if (params.replicates < 1 || params.max_iter < 1) throw ConfigError("kmeans: replicates and max_iter must be >= 1");

    const Matrix cols = points.transpose();
    KmeansInfo info;
    RunResult best;
    for (std::size_t r = 0; r < params.replicates; ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(params.seed), static_cast<std::uint32_t>(params.seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        RunResult run = lloyd(cols, params.k, params.max_iter, rng);
        info.replicate_sse.push_back(run.sse);
        info.replicate_histories.push_back(run.history);
        if (r == 0 || run.sse < best.sse) {
            best = std::move(run);
            info.best_replicate = r;
        }
    }

    ClusteringResult out;
    out.method = Method::kmeans;
    out.n_clusters = static_cast<int>(params.k);
    out.labels = best.labels;
    info.centroids = best.centroids;
    info.sse = best.sse;
    info.sse_history = best.history;
    info.iterations = best.iterations;
    out.metadata = std::move(info);
    return out;
}

} // namespace sdr

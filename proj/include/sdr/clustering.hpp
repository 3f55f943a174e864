#pragma once

#include "sdr/dataset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sdr {

enum class Method { kmeans, hc_complete, hc_ward, dbscan, spectral };

inline constexpr Method all_methods[] = {Method::kmeans, Method::hc_complete, Method::hc_ward, Method::dbscan,
                                         Method::spectral};

std::string to_string(Method m);
Method parse_method(const std::string& s);

struct KmeansInfo {
    Matrix centroids;
    double sse = 0.0;
    /// SSE after each assignment step of the winning replicate.
    std::vector<double> sse_history;
    /// Final SSE of every replicate, in run order.
    std::vector<double> replicate_sse;
    std::vector<std::vector<double>> replicate_histories;
    std::size_t iterations = 0;
    std::size_t best_replicate = 0;
};

struct Merge {
    /// Representative point of each merged cluster.
    int a = 0;
    int b = 0;
    double distance = 0.0;
    std::size_t size = 0;
};

struct HcInfo {
    /// N-1 merges sorted by non-decreasing distance.
    std::vector<Merge> merges;
};

struct DbscanInfo {
    double eps = 0.0;
    std::size_t min_pts = 0;
    std::vector<bool> core;
    std::size_t n_noise = 0;
    bool auto_params = false;
};

struct SpectralInfo {
    std::size_t knn = 0;
    /// The k smallest normalized-Laplacian eigenvalues, ascending.
    Vector eigenvalues;
    std::size_t n_components = 0;
    std::string warning;
    bool solver_converged = true;
};

using ClusteringMetadata = std::variant<std::monostate, KmeansInfo, HcInfo, DbscanInfo, SpectralInfo>;

struct ClusteringResult {
    LabelVector labels;
    int n_clusters = 0;
    Method method = Method::kmeans;
    ClusteringMetadata metadata;
};

// ---- k-means -------------------------------------------------------------

struct KmeansParams {
    std::size_t k = 2;
    std::size_t replicates = 10;
    std::size_t max_iter = 100;
    std::uint64_t seed = 0;
};

/// Lloyd iterations on squared Euclidean distance with k-means++ seeding;
/// the replicate with the lowest SSE wins. An emptied cluster is reseeded
/// at the point farthest from its current centroid.
ClusteringResult kmeans(const Matrix& points, const KmeansParams& params);

double sum_of_squared_errors(const Matrix& points, const LabelVector& labels, const Matrix& centroids);

// ---- hierarchical --------------------------------------------------------

enum class Linkage { complete, ward };

/// Agglomerative clustering with Lance-Williams updates (nearest-neighbor
/// chain), cut to exactly k clusters. Cluster ids follow the lowest member index.
ClusteringResult hc(const Matrix& points, std::size_t k, Linkage linkage);

/// Cut a merge list (sorted by distance) into k flat clusters.
LabelVector cut_tree(const std::vector<Merge>& merges, std::size_t n_points, std::size_t k);

// ---- DBSCAN --------------------------------------------------------------

struct DbscanParams {
    double eps = 1.0;
    std::size_t min_pts = 4;
};

/// Core points have at least min_pts points (themselves included) within eps.
/// Clusters are connected components of cores; each border point joins the
/// cluster of its lowest-index core neighbor; the rest are -1.
ClusteringResult dbscan(const Matrix& points, const DbscanParams& params);

struct AutoParams {
    double eps = 0.0;
    std::size_t min_pts = 0;
    std::size_t knee_index = 0;
    std::vector<double> k_distances;
};

/// max(2, round(ln N)).
std::size_t log_n_rule(std::size_t n_points);

/// Index of the point of an ascending curve farthest from the chord between
/// its end points; ties resolve to the smallest index.
std::size_t knee_index(const std::vector<double>& sorted_values);

/// min_pts from the log rule, eps at the knee of the sorted distance to the
/// min_pts-th nearest point (the point itself counted first).
AutoParams dbscan_auto_params(const Matrix& points);

// ---- spectral ------------------------------------------------------------

struct SpectralParams {
    std::size_t k = 2;
    /// Defaults to the log rule.
    std::optional<std::size_t> knn;
    std::size_t replicates = 10;
    std::uint64_t seed = 0;
};

/// Symmetrized binary kNN graph as sorted adjacency lists.
std::vector<std::vector<int>> knn_graph(const Matrix& points, std::size_t knn);

/// I - D^-1/2 W D^-1/2 of an unweighted graph.
Matrix normalized_laplacian(const std::vector<std::vector<int>>& graph);

/// Component id per vertex, numbered by lowest member.
std::vector<int> connected_components(const std::vector<std::vector<int>>& graph);

ClusteringResult spectral(const Matrix& points, const SpectralParams& params);

// ---- dispatch ------------------------------------------------------------

struct MethodSpec {
    Method method = Method::kmeans;
    std::size_t k = 2;
    std::size_t replicates = 10;
    std::size_t max_iter = 100;
    std::uint64_t seed = 0;
    /// DBSCAN: both unset means auto parameters.
    std::optional<double> eps;
    std::optional<std::size_t> min_pts;
    std::optional<std::size_t> knn;
};

ClusteringResult run_method(const Matrix& points, const MethodSpec& spec);

} // namespace sdr

#pragma once

#include "sdr/dataset.hpp"

#include <cstdint>
#include <vector>

namespace sdr {

/// Rows are predicted clusters (a trailing row collects noise when any
/// -1 label is present), columns are ground-truth classes.
struct ConfusionMatrix {
    std::vector<std::vector<std::int64_t>> counts;
    std::vector<int> row_labels;
    std::vector<int> col_labels;
    bool has_noise_row = false;
    std::int64_t total = 0;

    [[nodiscard]] std::size_t rows() const { return counts.size(); }
    [[nodiscard]] std::size_t cols() const { return col_labels.size(); }
};

ConfusionMatrix confusion(const LabelVector& predicted, const LabelVector& truth);

/// Best one-to-one matching of clusters to classes (noise never matches),
/// as a point count. Hungarian algorithm on the padded square matrix.
std::int64_t matched_count(const ConfusionMatrix& cm);

/// The same count by enumerating every permutation. At most 8 clusters.
std::int64_t brute_force_matched_count(const ConfusionMatrix& cm);

double accuracy(const LabelVector& predicted, const LabelVector& truth);
double brute_force_accuracy(const LabelVector& predicted, const LabelVector& truth);

/// Majority class per cluster; the noise row counts like any other cluster.
double purity(const LabelVector& predicted, const LabelVector& truth);

/// 2 I(L;G) / (H(L) + H(G)) with natural logs; 1 when both entropies are zero.
double nmi(const LabelVector& predicted, const LabelVector& truth);

struct MetricReport {
    double accuracy = 0.0;
    double purity = 0.0;
    double nmi = 0.0;
    std::size_t n_predicted_clusters = 0;
    double noise_fraction = 0.0;
};

MetricReport evaluate(const LabelVector& predicted, const LabelVector& truth);

} // namespace sdr

#include "sdr/metrics.hpp"

#include "sdr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace sdr {

ConfusionMatrix confusion(const LabelVector& predicted, const LabelVector& truth)
{
    if (predicted.size() != truth.size())
        throw DataError("confusion: label vectors differ in length (" + std::to_string(predicted.size()) + " vs " +
                        std::to_string(truth.size()) + ")");
    if (predicted.empty()) throw DataError("confusion: empty label vectors");
    for (int g : truth)
        if (g < 0) throw DataError("confusion: ground truth contains negative labels");

    std::map<int, std::size_t> rows;
    std::map<int, std::size_t> cols;
    bool noise = false;
    for (std::size_t t = 0; t < predicted.size(); ++t) {
        if (predicted[t] < 0)
            noise = true;
        else
            rows.emplace(predicted[t], 0);
        cols.emplace(truth[t], 0);
    }
    ConfusionMatrix cm;
    for (auto& [label, idx] : rows) {
        idx = cm.row_labels.size();
        cm.row_labels.push_back(label);
    }
    for (auto& [label, idx] : cols) {
        idx = cm.col_labels.size();
        cm.col_labels.push_back(label);
    }
    cm.has_noise_row = noise;
    if (noise) cm.row_labels.push_back(-1);
    cm.counts.assign(cm.row_labels.size(), std::vector<std::int64_t>(cm.col_labels.size(), 0));
    for (std::size_t t = 0; t < predicted.size(); ++t) {
        const std::size_t r = predicted[t] < 0 ? cm.row_labels.size() - 1 : rows[predicted[t]];
        ++cm.counts[r][cols[truth[t]]];
    }
    cm.total = static_cast<std::int64_t>(predicted.size());
    return cm;
}

std::int64_t matched_count(const ConfusionMatrix& cm)
{
    const std::size_t r = cm.rows() - (cm.has_noise_row ? 1 : 0);
    const std::size_t c = cm.cols();
    const std::size_t s = std::max(r, c);
    if (s == 0) return 0;
    std::int64_t top = 0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) top = std::max(top, cm.counts[i][j]);
    auto cost = [&](std::size_t i, std::size_t j) -> std::int64_t {
        return top - ((i < r && j < c) ? cm.counts[i][j] : 0);
    };

    // Hungarian algorithm (potentials, 1-based), minimizing top - count.
    constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> u(s + 1, 0);
    std::vector<std::int64_t> v(s + 1, 0);
    std::vector<std::size_t> match(s + 1, 0);
    std::vector<std::size_t> way(s + 1, 0);
    for (std::size_t i = 1; i <= s; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<std::int64_t> minv(s + 1, inf);
        std::vector<bool> used(s + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            std::int64_t delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= s; ++j) {
                if (used[j]) continue;
                const std::int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= s; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::int64_t matched = 0;
    for (std::size_t j = 1; j <= s; ++j) {
        const std::size_t i = match[j] - 1;
        if (i < r && j - 1 < c) matched += cm.counts[i][j - 1];
    }
    return matched;
}

std::int64_t brute_force_matched_count(const ConfusionMatrix& cm)
{
    const std::size_t r = cm.rows() - (cm.has_noise_row ? 1 : 0);
    const std::size_t c = cm.cols();
    if (r > 8) throw ConfigError("brute_force_accuracy: more than 8 predicted clusters");

    // Each cluster takes a distinct class, or none when clusters outnumber classes.
    std::vector<bool> used(c, false);
    std::int64_t best = 0;
    auto search = [&](auto&& self, std::size_t i, std::size_t unmatched_left, std::int64_t acc) -> void {
        if (i == r) {
            best = std::max(best, acc);
            return;
        }
        for (std::size_t j = 0; j < c; ++j) {
            if (used[j]) continue;
            used[j] = true;
            self(self, i + 1, unmatched_left, acc + cm.counts[i][j]);
            used[j] = false;
        }
        if (unmatched_left > 0) self(self, i + 1, unmatched_left - 1, acc);
    };
    search(search, 0, r > c ? r - c : 0, 0);
    return best;
}

double accuracy(const LabelVector& predicted, const LabelVector& truth)
{
    const auto cm = confusion(predicted, truth);
    return static_cast<double>(matched_count(cm)) / static_cast<double>(cm.total);
}

double brute_force_accuracy(const LabelVector& predicted, const LabelVector& truth)
{
    const auto cm = confusion(predicted, truth);
    return static_cast<double>(brute_force_matched_count(cm)) / static_cast<double>(cm.total);
}

double purity(const LabelVector& predicted, const LabelVector& truth)
{
    const auto cm = confusion(predicted, truth);
    std::int64_t sum = 0;
    for (const auto& row : cm.counts) sum += *std::max_element(row.begin(), row.end());
    return static_cast<double>(sum) / static_cast<double>(cm.total);
}

double nmi(const LabelVector& predicted, const LabelVector& truth)
{
    const auto cm = confusion(predicted, truth);
    const auto n = static_cast<double>(cm.total);
    std::vector<double> row_p(cm.rows(), 0.0);
    std::vector<double> col_p(cm.cols(), 0.0);
    for (std::size_t i = 0; i < cm.rows(); ++i)
        for (std::size_t j = 0; j < cm.cols(); ++j) {
            row_p[i] += static_cast<double>(cm.counts[i][j]) / n;
            col_p[j] += static_cast<double>(cm.counts[i][j]) / n;
        }
    auto entropy = [](const std::vector<double>& p) {
        double h = 0.0;
        for (double x : p)
            if (x > 0.0) h -= x * std::log(x);
        return h;
    };
    double mi = 0.0;
    for (std::size_t i = 0; i < cm.rows(); ++i)
        for (std::size_t j = 0; j < cm.cols(); ++j) {
            if (cm.counts[i][j] == 0) continue;
            const double pij = static_cast<double>(cm.counts[i][j]) / n;
            mi += pij * std::log(pij / (row_p[i] * col_p[j]));
        }
    const double denom = entropy(row_p) + entropy(col_p);
    if (denom <= 0.0) return 1.0;
    return std::clamp(2.0 * mi / denom, 0.0, 1.0);
}

MetricReport evaluate(const LabelVector& predicted, const LabelVector& truth)
{
    MetricReport r;
    r.accuracy = accuracy(predicted, truth);
    r.purity = purity(predicted, truth);
    r.nmi = nmi(predicted, truth);
    const auto cm = confusion(predicted, truth);
    r.n_predicted_clusters = cm.rows() - (cm.has_noise_row ? 1 : 0);
    std::size_t noise = 0;
    for (int l : predicted)
        if (l < 0) ++noise;
    r.noise_fraction = static_cast<double>(noise) / static_cast<double>(predicted.size());
    return r;
}

} // namespace sdr

#include "sdr/synth.hpp"

#include "sdr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace sdr {

SynthFamily parse_family(const std::string& s)
{
    if (s == "T1" || s == "t1") return SynthFamily::T1;
    if (s == "T2" || s == "t2") return SynthFamily::T2;
    if (s == "T3" || s == "t3") return SynthFamily::T3;
    if (s == "T4" || s == "t4") return SynthFamily::T4;
    if (s == "T5" || s == "t5") return SynthFamily::T5;
    throw ConfigError("unknown synthetic family '" + s + "' (expected T1..T5)");
}

std::string to_string(SynthFamily f)
{
    switch (f) {
    case SynthFamily::T1: return "T1";
    case SynthFamily::T2: return "T2";
    case SynthFamily::T3: return "T3";
    case SynthFamily::T4: return "T4";
    case SynthFamily::T5: return "T5";
    }
    return "?";
}

void SynthSpec::validate() const
{
    const std::size_t k = family == SynthFamily::T4 ? 5 : n_clusters;
    if (dims < 1) throw ConfigError("synth: dims must be >= 1");
    if (k < 1 || n_points < k) throw ConfigError("synth: need N >= n_clusters >= 1");
    if (family == SynthFamily::T5 && !(snr > 0.0)) throw ConfigError("synth: snr must be > 0 for T5");
    if (!(sigma > 0.0)) throw ConfigError("synth: sigma must be > 0");
    if (family == SynthFamily::T3 && (!(skew_ratio > 0.0) || skew_ratio > 1.0))
        throw ConfigError("synth: skew_ratio must be in (0,1]");
    if (family == SynthFamily::T3 && min_share * static_cast<double>(k) > 1.0)
        throw ConfigError("synth: min_share too large for the cluster count");
}

namespace {

Matrix place_centers(std::size_t count, std::size_t dims, double half_width, double min_dist, int max_attempts,
                     std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> uni(-half_width, half_width);
    Matrix centers(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dims));
    for (std::size_t c = 0; c < count; ++c) {
        bool placed = false;
        for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
            Vector cand(static_cast<Eigen::Index>(dims));
            for (auto& v : cand) v = uni(rng);
            placed = true;
            for (std::size_t p = 0; p < c && placed; ++p)
                if ((centers.row(static_cast<Eigen::Index>(p)).transpose() - cand).norm() < min_dist) placed = false;
            if (placed) centers.row(static_cast<Eigen::Index>(c)) = cand.transpose();
        }
        if (!placed)
            throw ConfigError("synth: could not place " + std::to_string(count) + " centers with the requested "
                              "separation; lower n_clusters or raise dims");
    }
    return centers;
}

std::vector<std::size_t> equal_sizes(std::size_t n, std::size_t k)
{
    std::vector<std::size_t> sizes(k, n / k);
    for (std::size_t i = 0; i < n % k; ++i) ++sizes[i];
    return sizes;
}

// Geometric shares r^c, floored at min_share of N, non-increasing.
std::vector<std::size_t> skewed_sizes(std::size_t n, std::size_t k, double ratio, double min_share)
{
    const auto floor_size = static_cast<std::size_t>(std::ceil(min_share * static_cast<double>(n)));
    double total = 0.0;
    for (std::size_t c = 0; c < k; ++c) total += std::pow(ratio, static_cast<double>(c));
    std::vector<std::size_t> sizes(k);
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const double share = std::pow(ratio, static_cast<double>(c)) / total;
        sizes[c] = std::max<std::size_t>({floor_size, 1, static_cast<std::size_t>(std::floor(share * static_cast<double>(n)))});
        assigned += sizes[c];
    }
    // Remainder (or excess from flooring) settles on the largest clusters first.
    std::size_t c = 0;
    while (assigned < n) {
        ++sizes[c % k];
        ++assigned;
        ++c;
    }
    while (assigned > n) {
        auto largest = std::max_element(sizes.begin(), sizes.end());
        --*largest;
        --assigned;
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

} // namespace

SynthOutput generate_detailed(const SynthSpec& spec)
{
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sigma = spec.sigma;
    const auto dims = static_cast<Eigen::Index>(spec.dims);

    SynthOutput out;
    LabelVector labels;
    LabelVector sublabels;
    std::vector<int> component_class;

    if (spec.family == SynthFamily::T4) {
        const Matrix super = place_centers(3, spec.dims, spec.box * sigma, (spec.separation + spec.pair_gap) * sigma,
                                           spec.max_attempts, rng);
        out.centers.resize(5, dims);
        for (Eigen::Index pair = 0; pair < 2; ++pair) {
            Vector dir(dims);
            for (auto& v : dir) v = normal(rng);
            dir.normalize();
            const Vector offset = 0.5 * spec.pair_gap * sigma * dir;
            out.centers.row(2 * pair) = super.row(pair) + offset.transpose();
            out.centers.row(2 * pair + 1) = super.row(pair) - offset.transpose();
        }
        out.centers.row(4) = super.row(2);
        component_class = {0, 0, 1, 1, 2};
        out.sigmas.assign(5, sigma);
        out.sizes = equal_sizes(spec.n_points, 5);
    } else {
        const std::size_t k = spec.n_clusters;
        out.centers = place_centers(k, spec.dims, spec.box * sigma, spec.separation * sigma, spec.max_attempts, rng);
        component_class.resize(k);
        for (std::size_t c = 0; c < k; ++c) component_class[c] = static_cast<int>(c);
        out.sigmas.assign(k, sigma);
        if (spec.family == SynthFamily::T2) {
            std::uniform_real_distribution<double> decade(0.0, 1.0);
            for (auto& s : out.sigmas) s = sigma * std::pow(10.0, -decade(rng));
        }
        out.sizes = spec.family == SynthFamily::T3
                        ? skewed_sizes(spec.n_points, k, spec.skew_ratio, spec.min_share)
                        : equal_sizes(spec.n_points, k);
    }

    Matrix points(static_cast<Eigen::Index>(spec.n_points), dims);
    Eigen::Index row = 0;
    for (std::size_t c = 0; c < out.sizes.size(); ++c) {
        for (std::size_t i = 0; i < out.sizes[c]; ++i, ++row) {
            for (Eigen::Index d = 0; d < dims; ++d)
                points(row, d) = out.centers(static_cast<Eigen::Index>(c), d) + out.sigmas[c] * normal(rng);
            labels.push_back(component_class[c]);
            sublabels.push_back(static_cast<int>(c));
        }
    }

    if (spec.family == SynthFamily::T5) {
        double signal_var = 0.0;
        for (Eigen::Index d = 0; d < dims; ++d) {
            const auto col = points.col(d);
            signal_var += (col.array() - col.mean()).square().sum() / static_cast<double>(std::max<Eigen::Index>(1, points.rows() - 1));
        }
        signal_var /= static_cast<double>(dims);
        const double noise_sd = std::sqrt(signal_var / spec.snr);
        std::mt19937_64 noise_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
        std::normal_distribution<double> noise(0.0, noise_sd);
        for (Eigen::Index r = 0; r < points.rows(); ++r)
            for (Eigen::Index d = 0; d < dims; ++d) points(r, d) += noise(noise_rng);
    }

    out.data.points = std::move(points);
    out.data.labels = std::move(labels);
    if (spec.family == SynthFamily::T4) out.data.aux_labels["sublabel"] = std::move(sublabels);
    for (std::size_t d = 0; d < spec.dims; ++d) out.data.column_names.push_back("x" + std::to_string(d + 1));
    out.data.name = to_string(spec.family);
    return out;
}

Dataset generate(const SynthSpec& spec) { return generate_detailed(spec).data; }

} // namespace sdr

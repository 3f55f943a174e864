#pragma once

#include "sdr/dataset.hpp"

#include <cstdint>
#include <string>

namespace sdr {

/// Synthetic Gaussian families.
///   T1  equal isotropic clusters
///   T2  per-cluster sigma drawn log-uniformly over one decade
///   T3  geometric (skewed) cluster sizes
///   T4  two close pairs of sub-clusters plus one isolated cluster
///   T5  T1 plus additive Gaussian noise at a given signal-to-noise ratio
enum class SynthFamily { T1, T2, T3, T4, T5 };

SynthFamily parse_family(const std::string& s);
std::string to_string(SynthFamily f);

struct SynthSpec {
    SynthFamily family = SynthFamily::T1;
    std::size_t n_points = 5000;
    std::size_t dims = 20;
    std::size_t n_clusters = 5;
    std::uint64_t seed = 1;
    /// Linear variance ratio, T5 only.
    double snr = 10.0;
    double sigma = 1.0;
    /// Minimum center distance in units of sigma.
    double separation = 8.0;
    /// Half-width of the center sampling box in units of sigma.
    double box = 10.0;
    /// T3: size ratio between consecutive clusters.
    double skew_ratio = 0.5;
    /// T3: minimum cluster share of N.
    double min_share = 0.02;
    /// T4: center gap inside a close pair, in units of sigma.
    double pair_gap = 3.0;
    int max_attempts = 10000;

    void validate() const;
};

struct SynthOutput {
    Dataset data;
    /// One row per generating component (5 for T4).
    Matrix centers;
    std::vector<double> sigmas;
    std::vector<std::size_t> sizes;
};

SynthOutput generate_detailed(const SynthSpec& spec);

/// Labels hold the class (super-class for T4); T4 also carries `sublabel`.
Dataset generate(const SynthSpec& spec);

} // namespace sdr

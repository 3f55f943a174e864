#pragma once

#include "sdr/clustering.hpp"
#include "sdr/config.hpp"
#include "sdr/metrics.hpp"
#include "sdr/projection.hpp"
#include "sdr/sharpening.hpp"
#include "sdr/synth.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sdr {

/// "lmds" projects the data as is; "slmds" sharpens first.
enum class Condition { lmds, slmds };

std::string to_string(Condition c);
Condition parse_condition(const std::string& s);

struct PipelineConfig {
    std::string dataset_name;
    std::optional<std::string> input_path;
    std::optional<std::string> label_column;
    std::vector<std::string> aux_label_columns;
    /// Synthetic source used when no input path is given.
    std::optional<SynthSpec> synth;
    /// Fix the synthetic seed across runs; otherwise each run draws its own data.
    bool synth_seed_fixed = false;

    /// Ground-truth column: "label" or the name of an aux label column.
    std::string truth = "label";
    /// Original class name -> super-class name.
    std::map<std::string, std::string> regroup;
    bool standardize = false;
    std::optional<double> pca_variance;

    std::vector<Condition> conditions{Condition::lmds, Condition::slmds};
    SharpenParams sharpen;
    LmdsParams projection;

    std::vector<Method> methods{std::begin(all_methods), std::end(all_methods)};
    /// Defaults to the ground-truth class count.
    std::optional<std::size_t> k;
    std::size_t replicates = 10;
    std::size_t max_iter = 100;
    std::optional<double> dbscan_eps;
    std::optional<std::size_t> dbscan_min_pts;
    std::optional<std::size_t> spectral_knn;

    std::size_t runs = 1;
    std::uint64_t seed = 0;
    std::string out_dir = "run";
    bool write_plots = true;

    static PipelineConfig from_config(const Config& cfg);
    void validate() const;
};

struct CellResult {
    std::size_t run = 0;
    std::uint64_t seed = 0;
    Condition condition = Condition::lmds;
    Method method = Method::kmeans;
    MetricReport report;
};

struct SummaryRow {
    std::string dataset;
    Condition condition = Condition::lmds;
    Method method = Method::kmeans;
    double accuracy_mean = 0.0, accuracy_std = 0.0;
    double purity_mean = 0.0, purity_std = 0.0;
    double nmi_mean = 0.0, nmi_std = 0.0;
    std::size_t runs = 0;
};

struct PipelineResult {
    std::string out_dir;
    std::size_t n_points = 0;
    std::size_t dims = 0;
    std::size_t n_classes = 0;
    std::optional<std::size_t> pca_components;
    std::optional<double> pca_retained;
    std::vector<CellResult> cells;
    std::vector<SummaryRow> summary;

    /// Per-run metric values of one cell, in run order.
    [[nodiscard]] std::vector<MetricReport> reports(Condition c, Method m) const;
};

/// Noise handling note stamped into every report.
extern const char* const noise_policy;

/// load -> [regroup/standardize/PCA] -> per condition: [sharpen] -> LMDS ->
/// cluster -> evaluate -> plot. Writes all artifacts under `out_dir`; on
/// failure leaves a FAILED marker naming the stage and rethrows.
PipelineResult run_pipeline(const PipelineConfig& config);

void write_labels_csv(const LabelVector& labels, const std::string& path);
LabelVector read_labels_csv(const std::string& path);

} // namespace sdr

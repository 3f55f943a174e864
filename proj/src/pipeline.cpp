#include "sdr/pipeline.hpp"

#include "sdr/errors.hpp"
#include "sdr/plot.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace sdr {

const char* const noise_policy =
    "dbscan noise (-1) is never matched under accuracy, forms its own row under purity, and its own cluster under nmi";

std::string to_string(Condition c) { return c == Condition::lmds ? "lmds" : "slmds"; }

Condition parse_condition(const std::string& s)
{
    if (s == "lmds" || s == "LMDS") return Condition::lmds;
    if (s == "slmds" || s == "SLMDS") return Condition::slmds;
    throw ConfigError("unknown condition '" + s + "' (expected lmds or slmds)");
}

PipelineConfig PipelineConfig::from_config(const Config& cfg)
{
    PipelineConfig pc;
    pc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    pc.out_dir = cfg.get_string("out_dir", pc.out_dir);
    pc.input_path = cfg.get("input");
    pc.label_column = cfg.get("label_col");
    pc.aux_label_columns = cfg.get_list("aux_label_cols", {});
    if (!pc.input_path) {
        SynthSpec s;
        s.family = parse_family(cfg.get_string("synth.family", "T1"));
        s.n_points = static_cast<std::size_t>(cfg.get_int("synth.n", 1000));
        s.dims = static_cast<std::size_t>(cfg.get_int("synth.dims", 20));
        s.n_clusters = static_cast<std::size_t>(cfg.get_int("synth.clusters", 5));
        s.snr = cfg.get_double("synth.snr", s.snr);
        s.sigma = cfg.get_double("synth.sigma", s.sigma);
        pc.synth_seed_fixed = cfg.has("synth.seed");
        s.seed = static_cast<std::uint64_t>(cfg.get_int("synth.seed", static_cast<long long>(pc.seed)));
        pc.synth = s;
    }
    pc.dataset_name = cfg.get_string("dataset.name", pc.input_path ? fs::path(*pc.input_path).stem().string()
                                                                     : to_string(pc.synth->family));
    pc.truth = cfg.get_string("truth", "label");
    for (const auto& pair : cfg.get_list("regroup", {})) {
        const auto colon = pair.find(':');
        if (colon == std::string::npos) throw ConfigError("regroup entry '" + pair + "' must be name:super");
        pc.regroup[pair.substr(0, colon)] = pair.substr(colon + 1);
    }
    pc.standardize = cfg.get_bool("standardize", false);
    if (cfg.has("pca.variance")) pc.pca_variance = cfg.get_double("pca.variance", 0.8);

    pc.conditions.clear();
    for (const auto& c : cfg.get_list("conditions", {"lmds", "slmds"})) pc.conditions.push_back(parse_condition(c));
    if (cfg.has("sharpen.k")) pc.sharpen.k_neighbors = static_cast<std::size_t>(cfg.get_int("sharpen.k", 0));
    pc.sharpen.step_size = cfg.get_double("sharpen.alpha", pc.sharpen.step_size);
    pc.sharpen.iterations = static_cast<std::size_t>(cfg.get_int("sharpen.iters", static_cast<long long>(pc.sharpen.iterations)));
    if (cfg.has("lmds.landmarks"))
        pc.projection.n_landmarks = static_cast<std::size_t>(cfg.get_int("lmds.landmarks", 0));
    pc.projection.target_dim = static_cast<std::size_t>(cfg.get_int("lmds.dim", 2));

    pc.methods.clear();
    for (const auto& m : cfg.get_list("methods", {"kmeans", "hc_complete", "hc_ward", "dbscan", "spectral"}))
        pc.methods.push_back(parse_method(m));
    if (cfg.has("k")) pc.k = static_cast<std::size_t>(cfg.get_int("k", 0));
    pc.replicates = static_cast<std::size_t>(cfg.get_int("kmeans.replicates", 10));
    pc.max_iter = static_cast<std::size_t>(cfg.get_int("kmeans.max_iter", 100));
    if (cfg.has("dbscan.eps")) pc.dbscan_eps = cfg.get_double("dbscan.eps", 0.0);
    if (cfg.has("dbscan.min_pts")) pc.dbscan_min_pts = static_cast<std::size_t>(cfg.get_int("dbscan.min_pts", 0));
    if (cfg.has("spectral.knn")) pc.spectral_knn = static_cast<std::size_t>(cfg.get_int("spectral.knn", 0));
    pc.runs = static_cast<std::size_t>(cfg.get_int("runs", 1));
    pc.write_plots = cfg.get_bool("plots", true);
    pc.validate();
    return pc;
}

void PipelineConfig::validate() const
{
    if (methods.empty()) throw ConfigError("pipeline: at least one clustering method is required");
    if (conditions.empty()) throw ConfigError("pipeline: at least one condition is required");
    if (runs < 1) throw ConfigError("pipeline: runs must be >= 1");
    if (input_path && !fs::exists(*input_path)) throw ConfigError("pipeline: input file '" + *input_path + "' not found");
    if (input_path && !label_column) throw ConfigError("pipeline: label_col is required for file input");
    if (!input_path && !synth) throw ConfigError("pipeline: no input file and no synthetic spec");
    if (synth) synth->validate();
    if (pca_variance && (!(*pca_variance > 0.0) || *pca_variance > 1.0))
        throw ConfigError("pipeline: pca.variance must be in (0, 1]");
    if (!(sharpen.step_size > 0.0) || sharpen.step_size > 1.0)
        throw ConfigError("pipeline: sharpen.alpha must be in (0, 1]");
    if (dbscan_eps.has_value() != dbscan_min_pts.has_value())
        throw ConfigError("pipeline: set both dbscan.eps and dbscan.min_pts, or neither");
}

std::vector<MetricReport> PipelineResult::reports(Condition c, Method m) const
{
    std::vector<MetricReport> out;
    for (const auto& cell : cells)
        if (cell.condition == c && cell.method == m) out.push_back(cell.report);
    return out;
}

void write_labels_csv(const LabelVector& labels, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << "cluster\n";
    for (int l : labels) out << l << '\n';
}

LabelVector read_labels_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open file");
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    LabelVector out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            std::size_t used = 0;
            const int v = std::stoi(line, &used);
            if (used != line.size() || v < -1) throw std::invalid_argument(line);
            out.push_back(v);
        } catch (const std::exception&) {
            throw DataError(path + ": row " + std::to_string(row) + ": invalid cluster label '" + line + "'");
        }
    }
    return out;
}

namespace {

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(name + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(name + ": " + e.what());
    }
}

void write_json(const ordered_json& j, const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    out << j.dump(2) << '\n';
}

ordered_json metadata_json(const ClusteringResult& r)
{
    ordered_json j = ordered_json::object();
    std::visit(
        [&](const auto& info) {
            using T = std::decay_t<decltype(info)>;
            if constexpr (std::is_same_v<T, KmeansInfo>) {
                j["sse"] = info.sse;
                j["iterations"] = info.iterations;
                j["best_replicate"] = info.best_replicate;
                j["replicate_sse"] = info.replicate_sse;
            } else if constexpr (std::is_same_v<T, HcInfo>) {
                j["merges"] = info.merges.size();
                if (!info.merges.empty()) j["final_merge_distance"] = info.merges.back().distance;
            } else if constexpr (std::is_same_v<T, DbscanInfo>) {
                j["eps"] = info.eps;
                j["min_pts"] = info.min_pts;
                j["auto_params"] = info.auto_params;
                j["n_noise"] = info.n_noise;
            } else if constexpr (std::is_same_v<T, SpectralInfo>) {
                j["knn"] = info.knn;
                j["n_components"] = info.n_components;
                j["eigenvalues"] = std::vector<double>(info.eigenvalues.begin(), info.eigenvalues.end());
                j["solver_converged"] = info.solver_converged;
                if (!info.warning.empty()) j["warning"] = info.warning;
            }
        },
        r.metadata);
    return j;
}

struct Prepared {
    Dataset data;
    LabelVector truth;
};

Prepared prepare(const PipelineConfig& cfg, std::uint64_t run_seed, PipelineResult& result)
{
    Dataset data = stage("load", [&] {
        if (cfg.input_path) {
            CsvOptions opt;
            opt.label_column = cfg.label_column;
            opt.aux_label_columns = cfg.aux_label_columns;
            return load_csv(*cfg.input_path, opt);
        }
        SynthSpec s = *cfg.synth;
        if (!cfg.synth_seed_fixed) s.seed = run_seed;
        return generate(s);
    });

    LabelVector truth = stage("load", [&] {
        if (cfg.truth == "label") {
            if (!data.labels) throw DataError("dataset has no ground-truth labels");
            return *data.labels;
        }
        auto it = data.aux_labels.find(cfg.truth);
        if (it == data.aux_labels.end()) throw DataError("ground-truth column '" + cfg.truth + "' not loaded");
        return it->second;
    });

    if (!cfg.regroup.empty()) {
        truth = stage("regroup", [&] {
            if (cfg.truth != "label") throw ConfigError("regroup applies to the primary label column only");
            return regroup(truth, ClassMap::from_names(data.label_names, cfg.regroup));
        });
    }
    if (cfg.standardize) data = standardize(data);
    if (cfg.pca_variance) {
        auto pca = stage("pca", [&] { return pca_reduce(data, *cfg.pca_variance); });
        result.pca_components = pca.n_components;
        result.pca_retained = pca.retained_fraction;
        data = std::move(pca.reduced);
    }
    return {std::move(data), std::move(truth)};
}

double mean_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v)
{
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

void write_summary(const PipelineConfig& cfg, PipelineResult& result, const fs::path& dir)
{
    for (Condition c : cfg.conditions)
        for (Method m : cfg.methods) {
            const auto reps = result.reports(c, m);
            std::vector<double> a;
            std::vector<double> p;
            std::vector<double> n;
            for (const auto& r : reps) {
                a.push_back(r.accuracy);
                p.push_back(r.purity);
                n.push_back(r.nmi);
            }
            result.summary.push_back({cfg.dataset_name, c, m, mean_of(a), std_of(a), mean_of(p), std_of(p), mean_of(n),
                                      std_of(n), reps.size()});
        }

    std::ofstream out(dir / "summary.csv", std::ios::binary);
    out << std::setprecision(6) << std::fixed;
    out << "dataset,condition,method,accuracy_mean,accuracy_std,purity_mean,purity_std,nmi_mean,nmi_std,runs\n";
    for (const auto& s : result.summary)
        out << s.dataset << ',' << to_string(s.condition) << ',' << to_string(s.method) << ',' << s.accuracy_mean << ','
            << s.accuracy_std << ',' << s.purity_mean << ',' << s.purity_std << ',' << s.nmi_mean << ',' << s.nmi_std
            << ',' << s.runs << '\n';

    // One table per metric: rows dataset x condition, columns methods.
    const std::pair<const char*, double SummaryRow::*> tables[] = {
        {"accuracy", &SummaryRow::accuracy_mean}, {"purity", &SummaryRow::purity_mean}, {"nmi", &SummaryRow::nmi_mean}};
    for (const auto& [name, field] : tables) {
        std::ofstream t(dir / (std::string("summary_") + name + ".csv"), std::ios::binary);
        t << std::setprecision(4) << std::fixed << "dataset,condition";
        for (Method m : cfg.methods) t << ',' << to_string(m);
        t << '\n';
        for (Condition c : cfg.conditions) {
            t << cfg.dataset_name << ',' << to_string(c);
            for (Method m : cfg.methods)
                for (const auto& s : result.summary)
                    if (s.condition == c && s.method == m) t << ',' << s.*field;
            t << '\n';
        }
    }
}

ordered_json manifest_json(const PipelineConfig& cfg, const PipelineResult& result)
{
    ordered_json j;
    j["dataset"] = cfg.dataset_name;
    if (cfg.input_path) {
        j["input"] = *cfg.input_path;
        j["label_col"] = *cfg.label_column;
    } else {
        const auto& s = *cfg.synth;
        j["synth"] = {{"family", to_string(s.family)}, {"n", s.n_points},       {"dims", s.dims},
                      {"clusters", s.n_clusters},      {"sigma", s.sigma},      {"separation_sigmas", s.separation},
                      {"box_sigmas", s.box},           {"snr_linear", s.snr},   {"seed_fixed", cfg.synth_seed_fixed},
                      {"seed", s.seed}};
    }
    j["truth"] = cfg.truth;
    if (!cfg.regroup.empty()) j["regroup"] = cfg.regroup;
    j["standardize"] = cfg.standardize;
    j["n_points"] = result.n_points;
    j["dims"] = result.dims;
    j["n_classes"] = result.n_classes;
    if (cfg.pca_variance) {
        j["pca"] = {{"variance_fraction", *cfg.pca_variance},
                    {"components", result.pca_components.value_or(0)},
                    {"retained_fraction", result.pca_retained.value_or(0.0)}};
    }
    std::vector<std::string> conds;
    for (Condition c : cfg.conditions) conds.push_back(to_string(c));
    j["conditions"] = conds;
    j["sharpen"] = {{"k_neighbors", cfg.sharpen.resolved_k(result.n_points)},
                    {"step_size", cfg.sharpen.step_size},
                    {"iterations", cfg.sharpen.iterations}};
    j["lmds"] = {{"landmarks", cfg.projection.resolved_landmarks(result.n_points)},
                 {"target_dim", cfg.projection.target_dim},
                 {"selection", "maxmin"}};
    std::vector<std::string> methods;
    for (Method m : cfg.methods) methods.push_back(to_string(m));
    j["methods"] = methods;
    j["k"] = cfg.k.value_or(result.n_classes);
    j["kmeans"] = {{"replicates", cfg.replicates}, {"max_iter", cfg.max_iter}};
    if (cfg.dbscan_eps)
        j["dbscan"] = {{"eps", *cfg.dbscan_eps}, {"min_pts", *cfg.dbscan_min_pts}};
    else
        j["dbscan"] = {{"auto_params", true}};
    j["spectral"] = {{"knn", cfg.spectral_knn ? ordered_json(*cfg.spectral_knn) : ordered_json("log_n_rule")}};
    j["runs"] = cfg.runs;
    j["seed"] = cfg.seed;
    j["noise_policy"] = noise_policy;
    return j;
}

} // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg)
{
    const fs::path dir(cfg.out_dir);
    PipelineResult result;
    result.out_dir = cfg.out_dir;
    try {
        stage("config", [&] { cfg.validate(); });
        fs::create_directories(dir);
        fs::remove(dir / "FAILED");
        std::ofstream timings(dir / "timings.csv", std::ios::binary);
        timings << "run,condition,stage,seconds\n";

        for (std::size_t run = 0; run < cfg.runs; ++run) {
            const std::uint64_t run_seed = cfg.seed + run;
            auto prepared = prepare(cfg, run_seed, result);
            const Dataset& data = prepared.data;
            const LabelVector& truth = prepared.truth;
            result.n_points = data.size();
            result.dims = data.dims();
            result.n_classes = std::set<int>(truth.begin(), truth.end()).size();
            const std::size_t k = cfg.k.value_or(result.n_classes);

            for (Condition cond : cfg.conditions) {
                const fs::path cell_dir = dir / ("run" + std::to_string(run)) / to_string(cond);
                fs::create_directories(cell_dir);
                auto tick = std::chrono::steady_clock::now();
                auto lap = [&](const char* what) {
                    const auto now = std::chrono::steady_clock::now();
                    timings << run << ',' << to_string(cond) << ',' << what << ','
                            << std::chrono::duration<double>(now - tick).count() << '\n';
                    tick = now;
                };

                Dataset input = data;
                if (cond == Condition::slmds) {
                    SharpenParams sp = cfg.sharpen;
                    sp.seed = run_seed;
                    input = stage("sharpen", [&] { return sharpen(data, sp); });
                    lap("sharpen");
                }
                LmdsParams lp = cfg.projection;
                lp.seed = run_seed;
                const auto proj = stage("project", [&] { return lmds(input.points, lp); });
                lap("project");
                Dataset projected = projection_dataset(proj, data);
                stage("project", [&] { save_csv(projected, (cell_dir / "projection.csv").string()); });

                for (Method m : cfg.methods) {
                    MethodSpec ms;
                    ms.method = m;
                    ms.k = k;
                    ms.replicates = cfg.replicates;
                    ms.max_iter = cfg.max_iter;
                    ms.seed = run_seed;
                    ms.eps = cfg.dbscan_eps;
                    ms.min_pts = cfg.dbscan_min_pts;
                    ms.knn = cfg.spectral_knn;
                    const std::string name = to_string(m);
                    const auto clustered = stage("cluster/" + name, [&] { return run_method(proj.coords, ms); });
                    lap(name.c_str());
                    const auto report = stage("evaluate/" + name, [&] { return evaluate(clustered.labels, truth); });

                    write_labels_csv(clustered.labels, (cell_dir / ("labels_" + name + ".csv")).string());
                    ordered_json rj;
                    rj["dataset"] = cfg.dataset_name;
                    rj["condition"] = to_string(cond);
                    rj["method"] = name;
                    rj["run"] = run;
                    rj["seed"] = run_seed;
                    rj["accuracy"] = report.accuracy;
                    rj["purity"] = report.purity;
                    rj["nmi"] = report.nmi;
                    rj["n_predicted_clusters"] = report.n_predicted_clusters;
                    rj["noise_fraction"] = report.noise_fraction;
                    rj["n_points"] = data.size();
                    rj["k"] = k;
                    rj["noise_policy"] = noise_policy;
                    rj["clustering"] = metadata_json(clustered);
                    write_json(rj, cell_dir / ("report_" + name + ".json"));
                    if (cfg.write_plots && proj.coords.cols() == 2)
                        stage("plot", [&] {
                            plot_scatter(proj.coords, clustered.labels, (cell_dir / ("scatter_" + name + ".svg")).string(),
                                         cfg.dataset_name + " " + to_string(cond) + " " + name);
                        });
                    result.cells.push_back({run, run_seed, cond, m, report});
                }
            }
        }
        write_summary(cfg, result, dir);
        write_json(manifest_json(cfg, result), dir / "manifest.json");
    } catch (const std::exception& e) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        std::ofstream failed(dir / "FAILED");
        failed << e.what() << '\n';
        throw;
    }
    return result;
}

} // namespace sdr

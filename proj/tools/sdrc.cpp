// sdrc: sharpen, project, cluster and score high-dimensional data.

#include "sdr/bench.hpp"
#include "sdr/clustering.hpp"
#include "sdr/config.hpp"
#include "sdr/dataset.hpp"
#include "sdr/errors.hpp"
#include "sdr/metrics.hpp"
#include "sdr/pipeline.hpp"
#include "sdr/plot.hpp"
#include "sdr/projection.hpp"
#include "sdr/sharpening.hpp"
#include "sdr/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

constexpr int exit_config = 2;
constexpr int exit_data = 3;
constexpr int exit_numeric = 4;

struct Globals {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir;
    std::string config;
};

sdr::CsvOptions csv_options(const std::string& label_col, const std::vector<std::string>& aux)
{
    sdr::CsvOptions opt;
    if (!label_col.empty()) opt.label_column = label_col;
    opt.aux_label_columns = aux;
    return opt;
}

std::string resolve_out(const Globals& g, const std::string& out)
{
    if (g.out_dir.empty() || fs::path(out).is_absolute()) return out;
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / out).string();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sharpened dimensionality reduction with automatic cluster labeling"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Global random seed")->each([&](const std::string&) { g.seed_given = true; });
    app.add_option("--out-dir", g.out_dir, "Directory for outputs");
    app.add_option("--config", g.config, "Pipeline config file (key = value)");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic Gaussian dataset (T1..T5)");
    std::string family = "T1";
    sdr::SynthSpec sspec;
    std::string synth_out;
    synth->add_option("--family", family, "T1 equal, T2 density, T3 skewed, T4 sub-clustered, T5 noisy");
    synth->add_option("--n", sspec.n_points, "Number of points")->capture_default_str();
    synth->add_option("--dims", sspec.dims, "Dimensionality")->capture_default_str();
    synth->add_option("--clusters", sspec.n_clusters, "Cluster count (T4 always has 5 components)")->capture_default_str();
    synth->add_option("--snr", sspec.snr, "Linear signal-to-noise variance ratio for T5")->capture_default_str();
    synth->add_option("--out", synth_out, "Output CSV")->required();

    // sharpen
    auto* sharp = app.add_subcommand("sharpen", "Move points along the local density gradient");
    std::string sh_in, sh_out, sh_label;
    std::vector<std::string> sh_aux;
    std::size_t sh_k = 0;
    sdr::SharpenParams sparams;
    sharp->add_option("--in", sh_in)->required();
    sharp->add_option("--out", sh_out)->required();
    sharp->add_option("--label-col", sh_label, "Label column carried through untouched");
    sharp->add_option("--aux-label-cols", sh_aux)->delimiter(',');
    sharp->add_option("--k", sh_k, "Neighbors per point (default round(sqrt(N)))");
    sharp->add_option("--alpha", sparams.step_size, "Step size in (0,1]")->capture_default_str();
    sharp->add_option("--iters", sparams.iterations, "Iterations")->capture_default_str();

    // project
    auto* project = app.add_subcommand("project", "Project with landmark MDS or PCA");
    std::string pr_method = "lmds", pr_in, pr_out, pr_label;
    std::vector<std::string> pr_aux;
    std::size_t pr_landmarks = 0;
    std::size_t pr_dim = 2;
    double pr_variance = 0.8;
    project->add_option("--method", pr_method, "lmds or pca")->check(CLI::IsMember({"lmds", "pca"}));
    project->add_option("--landmarks", pr_landmarks, "Landmark count (default min(N, max(50, round(sqrt(N)))))");
    project->add_option("--dim", pr_dim, "Target dimension")->capture_default_str();
    project->add_option("--variance", pr_variance, "PCA: retained variance fraction")->capture_default_str();
    project->add_option("--in", pr_in)->required();
    project->add_option("--out", pr_out)->required();
    project->add_option("--label-col", pr_label);
    project->add_option("--aux-label-cols", pr_aux)->delimiter(',');

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Label points with one clustering method");
    std::string cl_method = "kmeans", cl_in, cl_out, cl_label, cl_meta;
    std::vector<std::string> cl_aux;
    sdr::MethodSpec mspec;
    bool auto_params = false;
    double cl_eps = 0.0;
    std::size_t cl_min_pts = 0, cl_knn = 0;
    cluster->add_option("--method", cl_method, "kmeans, hc_complete, hc_ward, dbscan, spectral");
    cluster->add_option("--k", mspec.k, "Cluster count")->capture_default_str();
    cluster->add_option("--replicates", mspec.replicates, "k-means restarts")->capture_default_str();
    cluster->add_option("--max-iter", mspec.max_iter, "k-means iteration cap")->capture_default_str();
    cluster->add_flag("--auto-params", auto_params,
                      "DBSCAN: MinPts = round(ln N), eps at the knee of the k-distance plot (Euclidean distances; "
                      "eps is squared internally to compare against squared distances)");
    cluster->add_option("--eps", cl_eps, "DBSCAN radius");
    cluster->add_option("--min-pts", cl_min_pts, "DBSCAN core threshold, the point itself included");
    cluster->add_option("--knn", cl_knn, "Spectral: graph neighbors (default round(ln N))");
    cluster->add_option("--in", cl_in)->required();
    cluster->add_option("--out", cl_out, "Labels CSV (column `cluster`, -1 = noise)")->required();
    cluster->add_option("--label-col", cl_label, "Column excluded from the features");
    cluster->add_option("--aux-label-cols", cl_aux)->delimiter(',');
    cluster->add_option("--meta", cl_meta, "Optional JSON with method metadata");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score predicted labels against ground truth");
    std::string ev_pred, ev_truth, ev_label = "label", ev_out;
    std::vector<std::string> ev_aux;
    evaluate->add_option("--pred", ev_pred)->required();
    evaluate->add_option("--truth", ev_truth, "CSV holding the ground-truth column")->required();
    evaluate->add_option("--label-col", ev_label)->capture_default_str();
    evaluate->add_option("--aux-label-cols", ev_aux)->delimiter(',');
    evaluate->add_option("--out", ev_out, "Report JSON (stdout when omitted)");

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "Run the full sharpen/project/cluster/evaluate grid");
    std::vector<std::string> overrides;
    std::size_t runs = 0;
    pipeline->add_option("--set", overrides, "Override a config key, key=value (repeatable)");
    pipeline->add_option("--runs", runs, "Number of seeds (mean and std reported)");

    // bench
    auto* bench = app.add_subcommand("bench", "Time the five clustering methods over growing N");
    sdr::ScalingOptions sopt;
    std::string bench_out = "timings.csv";
    bench->add_option("--sizes", sopt.sizes, "Ascending sizes")->delimiter(',')->required();
    bench->add_option("--repeats", sopt.repeats, "Repeats per cell (>= 3)")->capture_default_str();
    bench->add_option("--dims", sopt.dims)->capture_default_str();
    bench->add_option("--out", bench_out)->capture_default_str();

    // plot
    auto* plot = app.add_subcommand("plot", "Render a labeled 2-D scatter as SVG");
    std::string pl_in, pl_labels, pl_out, pl_label, pl_title;
    std::vector<std::string> pl_aux;
    plot->add_option("--in", pl_in, "Projection CSV")->required();
    plot->add_option("--labels", pl_labels, "Labels CSV")->required();
    plot->add_option("--out", pl_out)->required();
    plot->add_option("--label-col", pl_label);
    plot->add_option("--aux-label-cols", pl_aux)->delimiter(',');
    plot->add_option("--title", pl_title);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*synth) {
            sspec.family = sdr::parse_family(family);
            sspec.seed = g.seed;
            sdr::save_csv(sdr::generate(sspec), resolve_out(g, synth_out));
        } else if (*sharp) {
            if (sh_k > 0) sparams.k_neighbors = sh_k;
            sparams.seed = g.seed;
            const auto data = sdr::load_csv(sh_in, csv_options(sh_label, sh_aux));
            sdr::save_csv(sdr::sharpen(data, sparams), resolve_out(g, sh_out));
        } else if (*project) {
            const auto data = sdr::load_csv(pr_in, csv_options(pr_label, pr_aux));
            if (pr_method == "pca") {
                const auto pca = sdr::pca_reduce(data, pr_variance);
                std::cerr << "pca: kept " << pca.n_components << " components, retained variance "
                          << pca.retained_fraction << '\n';
                sdr::save_csv(pca.reduced, resolve_out(g, pr_out));
            } else {
                sdr::LmdsParams lp;
                if (pr_landmarks > 0) lp.n_landmarks = pr_landmarks;
                lp.target_dim = pr_dim;
                lp.seed = g.seed;
                const auto proj = sdr::lmds(data.points, lp);
                sdr::save_csv(sdr::projection_dataset(proj, data), resolve_out(g, pr_out));
            }
        } else if (*cluster) {
            const auto data = sdr::load_csv(cl_in, csv_options(cl_label, cl_aux));
            mspec.method = sdr::parse_method(cl_method);
            mspec.seed = g.seed;
            if (!auto_params && cl_eps > 0.0) {
                mspec.eps = cl_eps;
                mspec.min_pts = cl_min_pts > 0 ? cl_min_pts : sdr::log_n_rule(data.size());
            }
            if (cl_knn > 0) mspec.knn = cl_knn;
            const auto result = sdr::run_method(data.points, mspec);
            sdr::write_labels_csv(result.labels, resolve_out(g, cl_out));
            if (const auto* info = std::get_if<sdr::DbscanInfo>(&result.metadata))
                std::cerr << "dbscan: eps=" << info->eps << " min_pts=" << info->min_pts << " noise=" << info->n_noise
                          << '\n';
            if (!cl_meta.empty()) {
                nlohmann::ordered_json j;
                j["method"] = cl_method;
                j["n_clusters"] = result.n_clusters;
                j["seed"] = g.seed;
                std::ofstream(resolve_out(g, cl_meta)) << j.dump(2) << '\n';
            }
        } else if (*evaluate) {
            const auto pred = sdr::read_labels_csv(ev_pred);
            const auto truth_data = sdr::load_csv(ev_truth, csv_options(ev_label, ev_aux));
            const auto r = sdr::evaluate(pred, *truth_data.labels);
            nlohmann::ordered_json j;
            j["accuracy"] = r.accuracy;
            j["purity"] = r.purity;
            j["nmi"] = r.nmi;
            j["n_predicted_clusters"] = r.n_predicted_clusters;
            j["noise_fraction"] = r.noise_fraction;
            j["n_points"] = pred.size();
            j["pred"] = ev_pred;
            j["truth"] = ev_truth;
            j["label_col"] = ev_label;
            j["noise_policy"] = sdr::noise_policy;
            if (ev_out.empty())
                std::cout << j.dump(2) << '\n';
            else
                std::ofstream(resolve_out(g, ev_out)) << j.dump(2) << '\n';
        } else if (*pipeline) {
            sdr::Config cfg = g.config.empty() ? sdr::Config{} : sdr::Config::load(g.config);
            for (const auto& kv : overrides) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw sdr::ConfigError("--set expects key=value, got '" + kv + "'");
                cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
            }
            if (g.seed_given) cfg.set("seed", std::to_string(g.seed));
            if (!g.out_dir.empty()) cfg.set("out_dir", g.out_dir);
            if (runs > 0) cfg.set("runs", std::to_string(runs));
            const auto result = sdr::run_pipeline(sdr::PipelineConfig::from_config(cfg));
            for (const auto& s : result.summary)
                std::cout << s.dataset << ' ' << sdr::to_string(s.condition) << ' ' << sdr::to_string(s.method)
                          << " accuracy=" << s.accuracy_mean << " purity=" << s.purity_mean << " nmi=" << s.nmi_mean
                          << '\n';
            std::cout << "artifacts in " << result.out_dir << '\n';
        } else if (*bench) {
            sopt.seed = g.seed;
            const auto rows = sdr::run_scaling(sopt);
            sdr::write_timings_csv(rows, resolve_out(g, bench_out));
            for (const auto& r : rows)
                std::cout << sdr::to_string(r.method) << " N=" << r.n_points << " median=" << r.median_seconds
                          << "s\n";
        } else if (*plot) {
            const auto data = sdr::load_csv(pl_in, csv_options(pl_label, pl_aux));
            const auto labels = sdr::read_labels_csv(pl_labels);
            sdr::plot_scatter(data.points, labels, resolve_out(g, pl_out), pl_title);
        }
    } catch (const sdr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const sdr::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return exit_data;
    } catch (const sdr::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#include "sdr/bench.hpp"

#include "sdr/errors.hpp"
#include "sdr/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>

namespace sdr {

namespace {

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double time_once(const Matrix& points, const MethodSpec& spec)
{
    const auto start = std::chrono::steady_clock::now();
    const auto result = run_method(points, spec);
    const auto stop = std::chrono::steady_clock::now();
    if (result.labels.size() != static_cast<std::size_t>(points.rows())) throw NumericError("bench: bad label count");
    return std::chrono::duration<double>(stop - start).count();
}

} // namespace

std::vector<TimingRow> run_scaling(const ScalingOptions& options)
{
    if (options.sizes.empty()) throw ConfigError("bench: sizes must be non-empty");
    if (!std::is_sorted(options.sizes.begin(), options.sizes.end()))
        throw ConfigError("bench: sizes must be ascending");
    if (options.repeats < 3) throw ConfigError("bench: repeats must be >= 3");

    std::vector<TimingRow> rows;
    for (std::size_t n : options.sizes) {
        SynthSpec spec;
        spec.family = SynthFamily::T1;
        spec.n_points = n;
        spec.dims = options.dims;
        spec.n_clusters = 5;
        spec.seed = options.seed;
        const Dataset data = generate(spec);

        for (Method m : all_methods) {
            MethodSpec ms;
            ms.method = m;
            ms.k = 5;
            ms.seed = options.seed;
            std::vector<double> samples;
            std::size_t repeats = options.repeats;
            while (true) {
                while (samples.size() < repeats) samples.push_back(time_once(data.points, ms));
                if (median(samples) >= options.resolution_floor || repeats >= options.max_repeats) break;
                repeats = std::min(options.max_repeats, repeats * 2);
            }
            rows.push_back({m, n, options.dims, std::max(median(samples), 1e-9), samples.size()});
        }
    }
    return rows;
}

void write_timings_csv(const std::vector<TimingRow>& rows, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << "method,N,dims,median_seconds,repeats\n";
    out << std::setprecision(9);
    for (const auto& r : rows)
        out << to_string(r.method) << ',' << r.n_points << ',' << r.dims << ',' << r.median_seconds << ','
            << r.repeats << '\n';
}

double log_log_slope(const std::vector<TimingRow>& rows, Method method)
{
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& r : rows)
        if (r.method == method) {
            xs.push_back(std::log(static_cast<double>(r.n_points)));
            ys.push_back(std::log(r.median_seconds));
        }
    if (xs.size() < 2) throw ConfigError("log_log_slope: need at least two sizes");
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

} // namespace sdr

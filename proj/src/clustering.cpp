#include "sdr/clustering.hpp"

#include "sdr/errors.hpp"

namespace sdr {

std::string to_string(Method m)
{
    switch (m) {
    case Method::kmeans: return "kmeans";
    case Method::hc_complete: return "hc_complete";
    case Method::hc_ward: return "hc_ward";
    case Method::dbscan: return "dbscan";
    case Method::spectral: return "spectral";
    }
    return "?";
}

Method parse_method(const std::string& s)
{
    for (Method m : all_methods)
        if (to_string(m) == s) return m;
    if (s == "hc-complete") return Method::hc_complete;
    if (s == "hc-ward") return Method::hc_ward;
    throw ConfigError("unknown clustering method '" + s + "'");
}

ClusteringResult run_method(const Matrix& points, const MethodSpec& spec)
{
    switch (spec.method) {
    case Method::kmeans:
        return kmeans(points, {spec.k, spec.replicates, spec.max_iter, spec.seed});
    case Method::hc_complete:
        return hc(points, spec.k, Linkage::complete);
    case Method::hc_ward:
        return hc(points, spec.k, Linkage::ward);
    case Method::dbscan: {
        if (spec.eps.has_value() != spec.min_pts.has_value())
            throw ConfigError("dbscan: give both eps and min_pts, or neither for automatic parameters");
        if (spec.eps) return dbscan(points, {*spec.eps, *spec.min_pts});
        const auto p = dbscan_auto_params(points);
        auto result = dbscan(points, {p.eps, p.min_pts});
        std::get<DbscanInfo>(result.metadata).auto_params = true;
        return result;
    }
    case Method::spectral:
        return spectral(points, {spec.k, spec.knn, spec.replicates, spec.seed});
    }
    throw ConfigError("unhandled clustering method");
}

} // namespace sdr

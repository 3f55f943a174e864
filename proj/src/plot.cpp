#include "sdr/plot.hpp"

#include "sdr/errors.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sdr {

namespace {

constexpr std::array<const char*, 12> palette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                                 "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#393b79", "#ad494a"};
constexpr const char* noise_color = "#b0b0b0";
constexpr double canvas = 600.0;
constexpr double inset = 40.0;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_scatter_svg(const Matrix& coords, const LabelVector& labels, const std::string& title)
{
    if (coords.cols() != 2) throw ConfigError("plot: projection must be 2-D");
    if (static_cast<std::size_t>(coords.rows()) != labels.size())
        throw DataError("plot: label count does not match point count");
    if (!coords.allFinite()) throw DataError("plot: non-finite coordinates");

    double lo[2] = {0.0, 0.0};
    double hi[2] = {1.0, 1.0};
    if (coords.rows() > 0) {
        for (int a = 0; a < 2; ++a) {
            lo[a] = coords.col(a).minCoeff();
            hi[a] = coords.col(a).maxCoeff();
            double span = hi[a] - lo[a];
            if (span <= 0.0) span = 1.0;
            lo[a] -= 0.05 * span;
            hi[a] += 0.05 * span;
        }
    }
    const double plot = canvas - 2.0 * inset;
    auto sx = [&](double x) { return inset + (x - lo[0]) / (hi[0] - lo[0]) * plot; };
    auto sy = [&](double y) { return canvas - inset - (y - lo[1]) / (hi[1] - lo[1]) * plot; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
       << "<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" \"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << canvas << "\" height=\"" << canvas
       << "\" viewBox=\"0 0 " << canvas << ' ' << canvas << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << canvas << "\" height=\"" << canvas << "\" fill=\"#ffffff\"/>\n"
       << "<rect x=\"" << inset << "\" y=\"" << inset << "\" width=\"" << plot << "\" height=\"" << plot
       << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    if (!title.empty())
        os << "<text x=\"" << canvas / 2 << "\" y=\"" << inset / 2
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title) << "</text>\n";
    os << "<g stroke=\"none\" fill-opacity=\"0.8\">\n";
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        const char* color = l < 0 ? noise_color : palette[static_cast<std::size_t>(l) % palette.size()];
        os << "<circle cx=\"" << fmt(sx(coords(i, 0))) << "\" cy=\"" << fmt(sy(coords(i, 1))) << "\" r=\"2\" fill=\""
           << color << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

void plot_scatter(const Matrix& coords, const LabelVector& labels, const std::string& path, const std::string& title)
{
    const auto svg = render_scatter_svg(coords, labels, title);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << svg;
}

} // namespace sdr

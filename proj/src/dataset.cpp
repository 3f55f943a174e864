#include "sdr/dataset.hpp"

#include "sdr/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace sdr {

namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
    std::string out(s.substr(b, e - b));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
    return out;
}

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        cells.push_back(trim(std::string_view(line).substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

std::string where(const std::string& path, std::size_t line, std::size_t col)
{
    std::ostringstream os;
    os << path << ": row " << line << ", column " << col;
    return os.str();
}

} // namespace

void Dataset::validate() const
{
    if (points.rows() < 1 || points.cols() < 1) throw DataError("dataset '" + name + "' is empty");
    if (!points.allFinite()) throw DataError("dataset '" + name + "' contains non-finite coordinates");
    auto check = [&](const LabelVector& l, const std::string& what) {
        if (l.size() != size()) throw DataError(what + " length does not match point count");
        for (int v : l)
            if (v < 0) throw DataError(what + " contains negative values");
    };
    if (labels) check(*labels, "labels");
    for (const auto& [col, l] : aux_labels) check(l, "label column '" + col + "'");
}

ClassMap ClassMap::from_names(const std::vector<std::string>& class_names,
                              const std::map<std::string, std::string>& assignment)
{
    ClassMap out;
    std::unordered_map<std::string, int> super_ids;
    for (std::size_t i = 0; i < class_names.size(); ++i) {
        auto it = assignment.find(class_names[i]);
        if (it == assignment.end()) continue;
        auto [pos, inserted] = super_ids.try_emplace(it->second, static_cast<int>(out.names.size()));
        if (inserted) out.names.push_back(it->second);
        out.mapping[static_cast<int>(i)] = pos->second;
    }
    return out;
}

ClassMap ClassMap::identity(int n_classes)
{
    ClassMap out;
    for (int i = 0; i < n_classes; ++i) out.mapping[i] = i;
    return out;
}

LabelVector encode_labels(const std::vector<std::string>& raw, std::vector<std::string>& names)
{
    names.clear();
    std::unordered_map<std::string, int> ids;
    LabelVector out;
    out.reserve(raw.size());
    for (const auto& r : raw) {
        auto [it, inserted] = ids.try_emplace(r, static_cast<int>(names.size()));
        if (inserted) names.push_back(r);
        out.push_back(it->second);
    }
    return out;
}

Dataset load_csv(const std::string& path, const CsvOptions& options)
{
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open file");

    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) throw DataError(path + ": empty file");
    const auto header = split_row(line);

    std::optional<std::size_t> label_idx;
    std::map<std::size_t, std::string> aux_idx;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (options.label_column && header[c] == *options.label_column) label_idx = c;
        for (const auto& a : options.aux_label_columns)
            if (header[c] == a) aux_idx[c] = a;
    }
    if (options.label_column && !label_idx)
        throw DataError(path + ": label column '" + *options.label_column + "' not found in header");

    Dataset data;
    data.name = path;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_idx && !aux_idx.count(c)) data.column_names.push_back(header[c]);
    const std::size_t n_numeric = data.column_names.size();
    if (n_numeric == 0) throw DataError(path + ": no numeric columns");

    std::vector<double> values;
    std::vector<std::string> raw_labels;
    std::map<std::string, std::vector<std::string>> raw_aux;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_row(line);
        if (cells.size() != header.size()) {
            std::ostringstream os;
            os << path << ": row " << line_no << " has " << cells.size() << " cells, expected "
               << header.size();
            throw DataError(os.str());
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx) {
                raw_labels.push_back(cells[c]);
                continue;
            }
            if (auto a = aux_idx.find(c); a != aux_idx.end()) {
                raw_aux[a->second].push_back(cells[c]);
                continue;
            }
            const auto& cell = cells[c];
            double v = 0.0;
            const char* first = cell.data();
            const char* last = cell.data() + cell.size();
            if (!cell.empty() && *first == '+') ++first;
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
                throw DataError(where(path, line_no, c + 1) + ": non-numeric value '" + cell + "'");
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw DataError(path + ": empty file (header only)");

    data.points.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n_numeric));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < n_numeric; ++c)
            data.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * n_numeric + c];
    if (label_idx) data.labels = encode_labels(raw_labels, data.label_names);
    for (const auto& [col, raw] : raw_aux) {
        std::vector<std::string> names;
        data.aux_labels[col] = encode_labels(raw, names);
    }
    data.validate();
    return data;
}

void save_csv(const Dataset& data, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    const auto n = data.dims();
    for (std::size_t c = 0; c < n; ++c) {
        if (c) out << ',';
        out << (c < data.column_names.size() ? data.column_names[c] : "x" + std::to_string(c + 1));
    }
    if (data.labels) out << ",label";
    for (const auto& [col, l] : data.aux_labels) out << ',' << col;
    out << '\n';
    out << std::setprecision(17);
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (c) out << ',';
            out << data.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
        if (data.labels) {
            const int l = (*data.labels)[r];
            out << ',';
            if (static_cast<std::size_t>(l) < data.label_names.size())
                out << data.label_names[static_cast<std::size_t>(l)];
            else
                out << l;
        }
        for (const auto& [col, l] : data.aux_labels) out << ',' << l[r];
        out << '\n';
    }
    if (!out) throw DataError(path + ": write failed");
}

LabelVector regroup(const LabelVector& labels, const ClassMap& map)
{
    LabelVector out;
    out.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = map.mapping.find(labels[i]);
        if (it == map.mapping.end())
            throw DataError("regroup: label " + std::to_string(labels[i]) + " at position " + std::to_string(i) +
                            " has no super-class");
        out.push_back(it->second);
    }
    return out;
}

Dataset standardize(const Dataset& data)
{
    Dataset out = data;
    const auto rows = static_cast<double>(data.points.rows());
    for (Eigen::Index c = 0; c < data.points.cols(); ++c) {
        auto col = out.points.col(c);
        const double mean = col.mean();
        col.array() -= mean;
        const double sd = std::sqrt(col.squaredNorm() / rows);
        // Rounding residue of a constant column is not variance.
        if (sd > 1e-12 * std::max(1.0, std::abs(mean)) && std::isfinite(sd))
            col /= sd;
        else
            col.setZero();
    }
    return out;
}

} // namespace sdr

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sdr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Cluster or class assignment per point. -1 is reserved for DBSCAN noise.
using LabelVector = std::vector<int>;

/// N x n observations with optional ground truth.
///
/// Labels are always 0-based and contiguous; `label_names[i]` holds the
/// original text of class i when the labels came from a file.
struct Dataset {
    Matrix points;
    std::optional<LabelVector> labels;
    std::vector<std::string> label_names;
    std::vector<std::string> column_names;
    /// Secondary label columns (e.g. `sublabel` for the sub-clustered family).
    std::map<std::string, LabelVector> aux_labels;
    std::string name;

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
    [[nodiscard]] std::size_t dims() const { return static_cast<std::size_t>(points.cols()); }

    /// Throws DataError when an invariant does not hold.
    void validate() const;
};

/// Sub-class id -> super-class id.
struct ClassMap {
    std::map<int, int> mapping;
    std::vector<std::string> names;

    /// Build from class names: `assignment` maps each original name to a
    /// super-class name. Super-class ids follow first appearance in
    /// `class_names` order.
    static ClassMap from_names(const std::vector<std::string>& class_names,
                               const std::map<std::string, std::string>& assignment);

    static ClassMap identity(int n_classes);
};

struct CsvOptions {
    std::optional<std::string> label_column;
    /// Integer-valued columns loaded into `aux_labels` instead of `points`.
    std::vector<std::string> aux_label_columns;
};

Dataset load_csv(const std::string& path, const CsvOptions& options = {});

/// Writes the header, coordinates with 17 significant digits, then the label
/// column (`label`) and any aux label columns.
void save_csv(const Dataset& data, const std::string& path);

LabelVector regroup(const LabelVector& labels, const ClassMap& map);

/// Column-wise z-score with population variance. Constant columns become zero.
Dataset standardize(const Dataset& data);

/// Encode arbitrary text labels as 0-based integers by first occurrence.
LabelVector encode_labels(const std::vector<std::string>& raw, std::vector<std::string>& names);

} // namespace sdr

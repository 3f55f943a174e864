#pragma once

#include "sdr/dataset.hpp"

#include <string>

namespace sdr {

/// SVG 1.1 scatter plot of a 2-D projection, one circle per point, colored
/// by label from a fixed 12-color palette; noise (-1) is gray. Output bytes
/// depend only on the inputs.
std::string render_scatter_svg(const Matrix& coords, const LabelVector& labels, const std::string& title = {});

void plot_scatter(const Matrix& coords, const LabelVector& labels, const std::string& path,
                  const std::string& title = {});

} // namespace sdr

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flexmc/sweep.hpp"
#include "flexmc/table.hpp"

namespace flexmc {

/// Optional override of a figure's primary axis.
struct FigureAxis {
  std::optional<double> lo, hi;
  std::optional<int> points;
};

std::vector<std::string> figure_ids();

/// Build the dataset behind one figure. Axis ranges default to spans around
/// the configuration's current values; see figure_ids() for valid ids.
Table reproduce_figure(const std::string& id, const Config& cfg, const SweepOptions& opts,
                       const FigureAxis& axis = {});

} // namespace flexmc

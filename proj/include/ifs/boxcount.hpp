#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ifs/geometry.hpp"

namespace ifs {

// Occupied cells of the axis-aligned mesh with cell size delta anchored at
// `anchor` (the ambient box corner).  Counts are only meaningful while
// delta >= 2 * cloud resolution.
long grid_count(const PointCloud& cloud, double delta, const Point& anchor);

struct BoxCountScan {
  std::vector<std::pair<double, long>> rows;  // (delta, count), delta decreasing
  double fitted_slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Least-squares slope of log N_delta against -log delta over >= 4 scales.
BoxCountScan fit_dimension(const PointCloud& cloud,
                           const std::vector<double>& deltas,
                           const Point& anchor);

// Largest p on the grid {0, 1/p_grid, ..., 1} with N_{delta^p} >= delta^(-p t);
// approximates the covering regularity exponent from below.
double regularity_exponent(const PointCloud& cloud, double t, double delta,
                           int p_grid, const Point& anchor);

struct RegularityScan {
  double t = 0.0;
  std::vector<std::pair<double, double>> rows;  // (delta, P_{t,delta})
  double p_liminf_proxy = 0.0;                  // min over the scanned deltas
  double grid_step = 0.0;
};

RegularityScan regularity_liminf(const PointCloud& cloud, double t,
                                 const std::vector<double>& deltas, int p_grid,
                                 const Point& anchor);

}  // namespace ifs

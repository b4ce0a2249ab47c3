#include "ifs/boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ifs {

namespace {

struct CellHash {
  size_t operator()(const std::array<int64_t, kMaxDim>& c) const {
    uint64_t h = 1469598103934665603ull;
    for (int64_t v : c) {
      h ^= static_cast<uint64_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace

long grid_count(const PointCloud& cloud, double delta, const Point& anchor) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (cloud.points.empty()) return 0;
  if (delta < 2.0 * cloud.resolution) {
    throw std::invalid_argument(
        "delta below twice the cloud resolution: counts would reflect the "
        "discretization");
  }
  const int d = cloud.dim();
  if (anchor.dim != d) throw std::invalid_argument("dimension mismatch");
  std::unordered_set<std::array<int64_t, kMaxDim>, CellHash> cells;
  cells.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    std::array<int64_t, kMaxDim> c{};
    for (int i = 0; i < d; ++i) {
      c[static_cast<size_t>(i)] =
          static_cast<int64_t>(std::floor((p[i] - anchor[i]) / delta));
    }
    cells.insert(c);
  }
  return static_cast<long>(cells.size());
}

BoxCountScan fit_dimension(const PointCloud& cloud,
                           const std::vector<double>& deltas,
                           const Point& anchor) {
  if (deltas.size() < 4) {
    throw std::invalid_argument("need at least 4 scales for a slope fit");
  }
  std::vector<double> sorted = deltas;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  BoxCountScan scan;
  for (double delta : sorted) {
    scan.rows.emplace_back(delta, grid_count(cloud, delta, anchor));
  }
  // least squares of log N against -log delta
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(scan.rows.size());
  for (const auto& [delta, count] : scan.rows) {
    const double x = -std::log(delta);
    const double y = std::log(static_cast<double>(std::max(1L, count)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("degenerate scale list");
  scan.fitted_slope = (n * sxy - sx * sy) / denom;
  scan.intercept = (sy - scan.fitted_slope * sx) / n;
  for (const auto& [delta, count] : scan.rows) {
    const double x = -std::log(delta);
    const double y = std::log(static_cast<double>(std::max(1L, count)));
    scan.max_residual = std::max(
        scan.max_residual, std::abs(y - scan.fitted_slope * x - scan.intercept));
  }
  return scan;
}

double regularity_exponent(const PointCloud& cloud, double t, double delta,
                           int p_grid, const Point& anchor) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0,1)");
  }
  if (p_grid < 16) throw std::invalid_argument("p grid must have >= 16 steps");
  if (delta < 2.0 * cloud.resolution) {
    throw std::invalid_argument("cloud resolution too coarse for this delta");
  }
  double best = 0.0;
  for (int i = 0; i <= p_grid; ++i) {
    const double p = static_cast<double>(i) / p_grid;
    const double scale = std::pow(delta, p);
    const long count = grid_count(cloud, scale, anchor);
    if (static_cast<double>(count) >= std::pow(delta, -p * t)) {
      best = p;  // p = 0 always qualifies on a nonempty cloud
    }
  }
  return best;
}

RegularityScan regularity_liminf(const PointCloud& cloud, double t,
                                 const std::vector<double>& deltas, int p_grid,
                                 const Point& anchor) {
  if (deltas.empty()) throw std::invalid_argument("empty delta list");
  for (size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] < deltas[i - 1])) {
      throw std::invalid_argument("delta list must be strictly decreasing");
    }
  }
  RegularityScan scan;
  scan.t = t;
  scan.grid_step = 1.0 / p_grid;
  scan.p_liminf_proxy = 1.0;
  for (double delta : deltas) {
    const double p = regularity_exponent(cloud, t, delta, p_grid, anchor);
    scan.rows.emplace_back(delta, p);
    scan.p_liminf_proxy = std::min(scan.p_liminf_proxy, p);
  }
  return scan;
}

}  // namespace ifs

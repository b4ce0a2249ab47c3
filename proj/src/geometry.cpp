#include "ifs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace ifs {

namespace {

void check_dim(int d) {
  if (d < 1 || d > kMaxDim) {
    throw std::invalid_argument("ambient dimension must be in 1..4");
  }
}

void check_finite(const Point& p) {
  for (int i = 0; i < p.dim; ++i) {
    if (!std::isfinite(p[i])) {
      throw std::invalid_argument("point coordinate not finite");
    }
  }
}

}  // namespace

Point make_point(std::initializer_list<double> coords) {
  return make_point(std::vector<double>(coords));
}

Point make_point(const std::vector<double>& coords) {
  check_dim(static_cast<int>(coords.size()));
  Point p;
  p.dim = static_cast<int>(coords.size());
  for (int i = 0; i < p.dim; ++i) p[i] = coords[static_cast<size_t>(i)];
  check_finite(p);
  return p;
}

double dist_sq(const Point& a, const Point& b) {
  if (a.dim != b.dim) throw std::invalid_argument("dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double dist(const Point& a, const Point& b) { return std::sqrt(dist_sq(a, b)); }

bool points_equal(const Point& a, const Point& b) {
  if (a.dim != b.dim) return false;
  for (int i = 0; i < a.dim; ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

bool point_less(const Point& a, const Point& b) {
  for (int i = 0; i < std::min(a.dim, b.dim); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return a.dim < b.dim;
}

void sort_points(std::vector<Point>& pts) {
  std::sort(pts.begin(), pts.end(), point_less);
}

// ---------------------------------------------------------------------------
// Similarity

namespace {

void validate_orthogonal(int dim, const std::array<double, 16>& lin,
                         double ratio) {
  // rows of lin/ratio must be orthonormal
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      double dot = 0.0;
      for (int k = 0; k < dim; ++k) {
        dot += lin[static_cast<size_t>(r * kMaxDim + k)] *
               lin[static_cast<size_t>(c * kMaxDim + k)];
      }
      const double want = (r == c) ? ratio * ratio : 0.0;
      if (std::abs(dot - want) > 1e-12 * std::max(1.0, ratio * ratio)) {
        throw std::invalid_argument("orthogonal part fails O*O^T = I check");
      }
    }
  }
}

void check_ratio(double ratio) {
  if (!(ratio > 0.0) || !(ratio < 1.0)) {
    throw std::invalid_argument("contraction ratio must lie in (0,1)");
  }
}

}  // namespace

Similarity Similarity::line(double ratio, int sign, double translate) {
  check_ratio(ratio);
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +-1");
  Similarity f;
  f.dim = 1;
  f.ratio = ratio;
  f.linear[0] = ratio * sign;
  f.translation = make_point({translate});
  f.exact_similarity = true;
  return f;
}

Similarity Similarity::planar(double ratio, double angle, bool reflect,
                              double tx, double ty) {
  check_ratio(ratio);
  Similarity f;
  f.dim = 2;
  f.ratio = ratio;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  // reflection about the x-axis applied first, then rotation
  const double ry = reflect ? -1.0 : 1.0;
  f.linear[0 * kMaxDim + 0] = ratio * c;
  f.linear[0 * kMaxDim + 1] = ratio * (-s) * ry;
  f.linear[1 * kMaxDim + 0] = ratio * s;
  f.linear[1 * kMaxDim + 1] = ratio * c * ry;
  f.translation = make_point({tx, ty});
  f.exact_similarity = true;
  return f;
}

Similarity Similarity::from_orthogonal(int dim, double ratio,
                                       const std::vector<double>& ortho,
                                       const Point& translate) {
  check_dim(dim);
  check_ratio(ratio);
  if (static_cast<int>(ortho.size()) != dim * dim) {
    throw std::invalid_argument("orthogonal matrix size mismatch");
  }
  if (translate.dim != dim) throw std::invalid_argument("dimension mismatch");
  Similarity f;
  f.dim = dim;
  f.ratio = ratio;
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      f.linear[static_cast<size_t>(r * kMaxDim + c)] =
          ratio * ortho[static_cast<size_t>(r * dim + c)];
    }
  }
  validate_orthogonal(dim, f.linear, ratio);
  f.translation = translate;
  f.exact_similarity = true;
  return f;
}

Similarity Similarity::from_linear(int dim, const std::vector<double>& lin,
                                   const Point& translate) {
  check_dim(dim);
  if (static_cast<int>(lin.size()) != dim * dim) {
    throw std::invalid_argument("linear matrix size mismatch");
  }
  if (translate.dim != dim) throw std::invalid_argument("dimension mismatch");
  Similarity f;
  f.dim = dim;
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      f.linear[static_cast<size_t>(r * kMaxDim + c)] =
          lin[static_cast<size_t>(r * dim + c)];
    }
  }
  // L^T L must be diagonal, so column norms give the exact operator norm
  double max_col = 0.0;
  double min_col = std::numeric_limits<double>::infinity();
  for (int c1 = 0; c1 < dim; ++c1) {
    for (int c2 = 0; c2 < dim; ++c2) {
      double dot = 0.0;
      for (int r = 0; r < dim; ++r) {
        dot += f.linear_at(r, c1) * f.linear_at(r, c2);
      }
      if (c1 == c2) {
        max_col = std::max(max_col, std::sqrt(dot));
        min_col = std::min(min_col, std::sqrt(dot));
      } else if (std::abs(dot) > 1e-9) {
        throw std::invalid_argument(
            "linear part must be axis-conformal (L^T L diagonal)");
      }
    }
  }
  check_ratio(max_col);
  f.ratio = max_col;
  f.translation = translate;
  // equal column norms mean L is a scaled orthogonal matrix
  f.exact_similarity = (max_col - min_col) <= 1e-12 * max_col;
  return f;
}

Similarity Similarity::identity(int dim) {
  check_dim(dim);
  Similarity f;
  f.dim = dim;
  f.ratio = 1.0;
  for (int i = 0; i < dim; ++i) f.linear[static_cast<size_t>(i * kMaxDim + i)] = 1.0;
  f.translation.dim = dim;
  f.exact_similarity = true;
  return f;
}

Point apply(const Similarity& f, const Point& p) {
  if (p.dim != f.dim) throw std::invalid_argument("dimension mismatch");
  Point out;
  out.dim = f.dim;
  for (int r = 0; r < f.dim; ++r) {
    double v = f.translation[r];
    for (int c = 0; c < f.dim; ++c) v += f.linear_at(r, c) * p[c];
    out[r] = v;
  }
  return out;
}

Similarity compose(const Similarity& f, const Similarity& g) {
  if (f.dim != g.dim) throw std::invalid_argument("dimension mismatch");
  Similarity h;
  h.dim = f.dim;
  for (int r = 0; r < f.dim; ++r) {
    for (int c = 0; c < f.dim; ++c) {
      double v = 0.0;
      for (int k = 0; k < f.dim; ++k) v += f.linear_at(r, k) * g.linear_at(k, c);
      h.linear[static_cast<size_t>(r * kMaxDim + c)] = v;
    }
  }
  h.translation = apply(f, g.translation);
  h.exact_similarity = f.exact_similarity && g.exact_similarity;
  if (h.exact_similarity) {
    h.ratio = f.ratio * g.ratio;
  } else {
    // axis-conformal family is closed under composition; the operator norm
    // is the max column norm
    double max_col = 0.0;
    for (int c = 0; c < h.dim; ++c) {
      double s = 0.0;
      for (int r = 0; r < h.dim; ++r) s += h.linear_at(r, c) * h.linear_at(r, c);
      max_col = std::max(max_col, std::sqrt(s));
    }
    h.ratio = max_col;
  }
  return h;
}

Point apply_inverse(const Similarity& f, const Point& p) {
  if (p.dim != f.dim) throw std::invalid_argument("dimension mismatch");
  // Solve L y = p - t by Gaussian elimination with partial pivoting (d <= 4).
  const int d = f.dim;
  double m[kMaxDim][kMaxDim + 1];
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) m[r][c] = f.linear_at(r, c);
    m[r][d] = p[r] - f.translation[r];
  }
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-300) {
      throw std::runtime_error("singular linear part");
    }
    if (piv != col) std::swap(m[piv], m[col]);
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      const double factor = m[r][col] / m[col][col];
      for (int c = col; c <= d; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  Point out;
  out.dim = d;
  for (int r = 0; r < d; ++r) out[r] = m[r][d] / m[r][r];
  return out;
}

Similarity product_map(const Similarity& f, const Similarity& g) {
  const int d = f.dim + g.dim;
  check_dim(d);
  Similarity h;
  h.dim = d;
  for (int r = 0; r < f.dim; ++r) {
    for (int c = 0; c < f.dim; ++c) {
      h.linear[static_cast<size_t>(r * kMaxDim + c)] = f.linear_at(r, c);
    }
  }
  for (int r = 0; r < g.dim; ++r) {
    for (int c = 0; c < g.dim; ++c) {
      h.linear[static_cast<size_t>((f.dim + r) * kMaxDim + (f.dim + c))] =
          g.linear_at(r, c);
    }
  }
  h.translation.dim = d;
  for (int i = 0; i < f.dim; ++i) h.translation[i] = f.translation[i];
  for (int i = 0; i < g.dim; ++i) h.translation[f.dim + i] = g.translation[i];
  h.ratio = std::max(f.ratio, g.ratio);
  h.exact_similarity = f.exact_similarity && g.exact_similarity &&
                       std::abs(f.ratio - g.ratio) == 0.0;
  return h;
}

// ---------------------------------------------------------------------------
// AmbientBox

AmbientBox make_box(const Point& lo, const Point& hi) {
  if (lo.dim != hi.dim) throw std::invalid_argument("dimension mismatch");
  for (int i = 0; i < lo.dim; ++i) {
    if (!(lo[i] <= hi[i])) {
      throw std::invalid_argument("box requires lo <= hi componentwise");
    }
  }
  return AmbientBox{lo, hi};
}

double AmbientBox::diameter() const { return dist(lo, hi); }

Point AmbientBox::center() const {
  Point c;
  c.dim = lo.dim;
  for (int i = 0; i < lo.dim; ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

Point AmbientBox::corner(unsigned mask) const {
  Point c;
  c.dim = lo.dim;
  for (int i = 0; i < lo.dim; ++i) c[i] = (mask >> i) & 1u ? hi[i] : lo[i];
  return c;
}

bool AmbientBox::contains(const Point& p, double tol) const {
  if (p.dim != lo.dim) return false;
  for (int i = 0; i < p.dim; ++i) {
    if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
  }
  return true;
}

bool maps_into(const Similarity& f, const AmbientBox& box, double tol) {
  if (f.dim != box.dim()) return false;
  const unsigned corners = 1u << box.dim();
  for (unsigned m = 0; m < corners; ++m) {
    if (!box.contains(apply(f, box.corner(m)), tol)) return false;
  }
  return true;
}

AmbientBox box_union(const AmbientBox& a, const AmbientBox& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  Point lo = a.lo, hi = a.hi;
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = std::min(lo[i], b.lo[i]);
    hi[i] = std::max(hi[i], b.hi[i]);
  }
  return AmbientBox{lo, hi};
}

AmbientBox box_product(const AmbientBox& a, const AmbientBox& b) {
  const int d = a.dim() + b.dim();
  check_dim(d);
  Point lo, hi;
  lo.dim = hi.dim = d;
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = a.lo[i];
    hi[i] = a.hi[i];
  }
  for (int i = 0; i < b.dim(); ++i) {
    lo[a.dim() + i] = b.lo[i];
    hi[a.dim() + i] = b.hi[i];
  }
  return AmbientBox{lo, hi};
}

// ---------------------------------------------------------------------------
// CondensationSet

CondensationSet CondensationSet::empty(int dim) {
  check_dim(dim);
  CondensationSet c;
  c.kind = ShapeKind::Empty;
  c.dim = dim;
  c.is_empty = true;
  return c;
}

CondensationSet CondensationSet::point_list(std::vector<Point> pts) {
  if (pts.empty()) throw std::invalid_argument("point list must be nonempty");
  CondensationSet c;
  c.kind = ShapeKind::PointList;
  c.dim = pts.front().dim;
  for (const auto& p : pts) {
    if (p.dim != c.dim) throw std::invalid_argument("dimension mismatch");
    check_finite(p);
  }
  c.points = std::move(pts);
  c.is_empty = false;
  return c;
}

CondensationSet CondensationSet::segment(const Point& a, const Point& b) {
  if (a.dim != b.dim) throw std::invalid_argument("dimension mismatch");
  CondensationSet c;
  c.kind = ShapeKind::Segment;
  c.dim = a.dim;
  c.a = a;
  c.b = b;
  c.is_empty = false;
  const bool degenerate = points_equal(a, b);
  c.hausdorff_dim = c.lower_box_dim = c.upper_box_dim = degenerate ? 0.0 : 1.0;
  return c;
}

CondensationSet CondensationSet::circle(const Point& center, double radius) {
  if (center.dim != 2) throw std::invalid_argument("circle requires d=2");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  CondensationSet c;
  c.kind = ShapeKind::Circle;
  c.dim = 2;
  c.center = center;
  c.radius = radius;
  c.is_empty = false;
  c.hausdorff_dim = c.lower_box_dim = c.upper_box_dim = 1.0;
  return c;
}

CondensationSet CondensationSet::disk(const Point& center, double radius) {
  if (center.dim != 2) throw std::invalid_argument("disk requires d=2");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  CondensationSet c;
  c.kind = ShapeKind::Disk;
  c.dim = 2;
  c.center = center;
  c.radius = radius;
  c.is_empty = false;
  c.hausdorff_dim = c.lower_box_dim = c.upper_box_dim = 2.0;
  return c;
}

CondensationSet CondensationSet::box(const Point& lo, const Point& hi) {
  AmbientBox bb = make_box(lo, hi);  // validates lo <= hi
  CondensationSet c;
  c.kind = ShapeKind::Box;
  c.dim = lo.dim;
  c.a = bb.lo;
  c.b = bb.hi;
  c.is_empty = false;
  int nondegenerate = 0;
  for (int i = 0; i < lo.dim; ++i) {
    if (hi[i] > lo[i]) ++nondegenerate;
  }
  c.hausdorff_dim = c.lower_box_dim = c.upper_box_dim = nondegenerate;
  return c;
}

CondensationSet CondensationSet::union_of(std::vector<CondensationSet> parts) {
  std::vector<CondensationSet> kept;
  for (auto& p : parts) {
    if (!p.is_empty) kept.push_back(std::move(p));
  }
  if (kept.empty()) {
    return parts.empty() ? CondensationSet::empty(1)
                         : CondensationSet::empty(parts.front().dim);
  }
  if (kept.size() == 1) return kept.front();
  CondensationSet c;
  c.kind = ShapeKind::Union;
  c.dim = kept.front().dim;
  for (const auto& p : kept) {
    if (p.dim != c.dim) throw std::invalid_argument("dimension mismatch");
    c.hausdorff_dim = std::max(c.hausdorff_dim, p.hausdorff_dim);
    c.lower_box_dim = std::max(c.lower_box_dim, p.lower_box_dim);
    c.upper_box_dim = std::max(c.upper_box_dim, p.upper_box_dim);
  }
  c.parts = std::move(kept);
  c.is_empty = false;
  return c;
}

bool CondensationSet::inside(const AmbientBox& box, double tol) const {
  switch (kind) {
    case ShapeKind::Empty:
      return true;
    case ShapeKind::PointList:
      for (const auto& p : points) {
        if (!box.contains(p, tol)) return false;
      }
      return true;
    case ShapeKind::Segment:
      return box.contains(a, tol) && box.contains(b, tol);
    case ShapeKind::Circle:
    case ShapeKind::Disk:
      for (int i = 0; i < dim; ++i) {
        if (center[i] - radius < box.lo[i] - tol) return false;
        if (center[i] + radius > box.hi[i] + tol) return false;
      }
      return true;
    case ShapeKind::Box:
      return box.contains(a, tol) && box.contains(b, tol);
    case ShapeKind::Union:
      for (const auto& p : parts) {
        if (!p.inside(box, tol)) return false;
      }
      return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// discretize

namespace {

PointCloud discretize_segment(const Point& a, const Point& b, double eps) {
  const double len = dist(a, b);
  PointCloud cloud;
  if (len == 0.0) {
    cloud.points.push_back(a);
    cloud.resolution = 0.0;
    return cloud;
  }
  const int n = std::max(1, static_cast<int>(std::ceil(len / eps)));
  cloud.points.reserve(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    Point p;
    p.dim = a.dim;
    for (int c = 0; c < a.dim; ++c) p[c] = a[c] + t * (b[c] - a[c]);
    cloud.points.push_back(p);
  }
  cloud.resolution = 0.5 * len / n;
  return cloud;
}

PointCloud discretize_circle(const Point& center, double radius, double eps) {
  // smallest mesh with chord gaps <= eps
  int m = 3;
  if (eps < 2.0 * radius) {
    m = std::max(3, static_cast<int>(std::ceil(
                        M_PI / std::asin(eps / (2.0 * radius)))));
  }
  PointCloud cloud;
  cloud.points.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double t = 2.0 * M_PI * i / m;
    Point p;
    p.dim = 2;
    p[0] = center[0] + radius * std::cos(t);
    p[1] = center[1] + radius * std::sin(t);
    cloud.points.push_back(p);
  }
  cloud.resolution = 2.0 * radius * std::sin(M_PI / (2.0 * m));
  return cloud;
}

PointCloud discretize_disk(const Point& center, double radius, double eps) {
  // square grid, points outside projected radially back onto the disk;
  // projection is 1-Lipschitz so the covering radius stays h/sqrt(2)
  const double h = eps;
  const int n = static_cast<int>(std::ceil(2.0 * radius / h));
  PointCloud cloud;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      Point p;
      p.dim = 2;
      p[0] = center[0] - radius + i * h;
      p[1] = center[1] - radius + j * h;
      const double dx = p[0] - center[0];
      const double dy = p[1] - center[1];
      const double r = std::hypot(dx, dy);
      if (r > radius) {
        if (r > radius + h) continue;  // too far to matter after projection
        p[0] = center[0] + dx * radius / r;
        p[1] = center[1] + dy * radius / r;
      }
      cloud.points.push_back(p);
    }
  }
  cloud.resolution = h / std::sqrt(2.0);
  return cloud;
}

PointCloud discretize_box(const Point& lo, const Point& hi, double eps) {
  const int d = lo.dim;
  int n[kMaxDim];
  double h[kMaxDim];
  double res_sq = 0.0;
  for (int i = 0; i < d; ++i) {
    const double len = hi[i] - lo[i];
    n[i] = len > 0.0 ? std::max(1, static_cast<int>(std::ceil(len / eps))) : 0;
    h[i] = n[i] > 0 ? len / n[i] : 0.0;
    res_sq += 0.25 * h[i] * h[i];
  }
  PointCloud cloud;
  std::array<int, kMaxDim> idx{};
  while (true) {
    Point p;
    p.dim = d;
    for (int i = 0; i < d; ++i) p[i] = lo[i] + idx[static_cast<size_t>(i)] * h[i];
    cloud.points.push_back(p);
    int axis = 0;
    while (axis < d) {
      if (++idx[static_cast<size_t>(axis)] <= n[axis]) break;
      idx[static_cast<size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == d) break;
  }
  cloud.resolution = std::sqrt(res_sq);
  return cloud;
}

}  // namespace

PointCloud discretize(const CondensationSet& c, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  switch (c.kind) {
    case ShapeKind::Empty:
      return PointCloud{};
    case ShapeKind::PointList: {
      PointCloud cloud;
      cloud.points = c.points;
      cloud.resolution = 0.0;
      sort_points(cloud.points);
      return cloud;
    }
    case ShapeKind::Segment:
      return discretize_segment(c.a, c.b, eps);
    case ShapeKind::Circle:
      return discretize_circle(c.center, c.radius, eps);
    case ShapeKind::Disk:
      return discretize_disk(c.center, c.radius, eps);
    case ShapeKind::Box:
      return discretize_box(c.a, c.b, eps);
    case ShapeKind::Union: {
      PointCloud cloud;
      for (const auto& part : c.parts) {
        PointCloud pc = discretize(part, eps);
        cloud.points.insert(cloud.points.end(), pc.points.begin(),
                            pc.points.end());
        cloud.resolution = std::max(cloud.resolution, pc.resolution);
      }
      sort_points(cloud.points);
      return cloud;
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// GridIndex

GridIndex::GridIndex(const std::vector<Point>& pts) : pts_(pts) {
  if (pts_.empty()) throw std::invalid_argument("index over empty cloud");
  dim_ = pts_.front().dim;
  Point lo = pts_.front(), hi = pts_.front();
  for (const auto& p : pts_) {
    if (p.dim != dim_) throw std::invalid_argument("dimension mismatch");
    for (int i = 0; i < dim_; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  origin_ = lo;
  double extent = 0.0;
  for (int i = 0; i < dim_; ++i) extent = std::max(extent, hi[i] - lo[i]);
  const double per_axis = std::ceil(
      std::pow(static_cast<double>(pts_.size()), 1.0 / dim_));
  cell_ = extent > 0.0 ? extent / std::max(1.0, per_axis) : 1.0;

  size_t total = 1;
  for (int i = 0; i < dim_; ++i) {
    const int n =
        1 + static_cast<int>(std::floor((hi[i] - lo[i]) / cell_ + 1e-12));
    cells_per_axis_[static_cast<size_t>(i)] = n;
    max_ring_ = std::max(max_ring_, n);
    total *= static_cast<size_t>(n);
  }
  buckets_.assign(total, {});
  for (uint32_t k = 0; k < pts_.size(); ++k) {
    buckets_[bucket_of(cell_of(pts_[k]))].push_back(k);
  }
}

std::array<int, kMaxDim> GridIndex::cell_of(const Point& p) const {
  std::array<int, kMaxDim> c{};
  for (int i = 0; i < dim_; ++i) {
    int v = static_cast<int>(std::floor((p[i] - origin_[i]) / cell_));
    v = std::clamp(v, 0, cells_per_axis_[static_cast<size_t>(i)] - 1);
    c[static_cast<size_t>(i)] = v;
  }
  return c;
}

size_t GridIndex::bucket_of(const std::array<int, kMaxDim>& c) const {
  size_t idx = 0;
  for (int i = 0; i < dim_; ++i) {
    idx = idx * static_cast<size_t>(cells_per_axis_[static_cast<size_t>(i)]) +
          static_cast<size_t>(c[static_cast<size_t>(i)]);
  }
  return idx;
}

double GridIndex::brute_force(const Point& q) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pts_) best = std::min(best, dist_sq(q, p));
  return std::sqrt(best);
}

double GridIndex::nearest_distance(const Point& q) const {
  if (q.dim != dim_) throw std::invalid_argument("dimension mismatch");
  if (pts_.size() <= 64) return brute_force(q);

  // ring search: cells at Chebyshev distance r from the query cell are at
  // Euclidean distance >= (r-1)*cell from the query point
  std::array<int, kMaxDim> qc{};
  for (int i = 0; i < dim_; ++i) {
    qc[static_cast<size_t>(i)] =
        static_cast<int>(std::floor((q[i] - origin_[i]) / cell_));
  }
  double best_sq = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= max_ring_ + 1; ++r) {
    const double ring_min = (r - 1) * cell_;
    if (ring_min > 0.0 && best_sq <= ring_min * ring_min) break;

    std::array<int, kMaxDim> off{};
    for (int i = 0; i < dim_; ++i) off[static_cast<size_t>(i)] = -r;
    while (true) {
      int cheb = 0;
      for (int i = 0; i < dim_; ++i) {
        cheb = std::max(cheb, std::abs(off[static_cast<size_t>(i)]));
      }
      if (cheb == r) {
        std::array<int, kMaxDim> c{};
        bool in_range = true;
        for (int i = 0; i < dim_; ++i) {
          const int v = qc[static_cast<size_t>(i)] + off[static_cast<size_t>(i)];
          if (v < 0 || v >= cells_per_axis_[static_cast<size_t>(i)]) {
            in_range = false;
            break;
          }
          c[static_cast<size_t>(i)] = v;
        }
        if (in_range) {
          for (uint32_t k : buckets_[bucket_of(c)]) {
            best_sq = std::min(best_sq, dist_sq(q, pts_[k]));
          }
        }
      }
      int axis = 0;
      while (axis < dim_) {
        if (++off[static_cast<size_t>(axis)] <= r) break;
        off[static_cast<size_t>(axis)] = -r;
        ++axis;
      }
      if (axis == dim_) break;
    }
  }
  return std::sqrt(best_sq);
}

double directed_hausdorff(const PointCloud& from, const PointCloud& to) {
  if (from.points.empty() || to.points.empty()) {
    throw std::invalid_argument("hausdorff distance of empty cloud");
  }
  GridIndex index(to.points);
  double worst = 0.0;
  for (const auto& p : from.points) {
    worst = std::max(worst, index.nearest_distance(p));
  }
  return worst;
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace ifs

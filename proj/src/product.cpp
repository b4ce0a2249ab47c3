#include "ifs/product.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

namespace ifs {

// ---------------------------------------------------------------------------
// product condensation

namespace {

struct BoxPart {
  Point lo, hi;
};

// decompose a primitive into axis-aligned boxes (points and axis-aligned
// segments are degenerate boxes); circles and disks have no exact product
std::vector<BoxPart> as_boxes(const CondensationSet& c) {
  std::vector<BoxPart> out;
  switch (c.kind) {
    case ShapeKind::Empty:
      return out;
    case ShapeKind::PointList:
      for (const auto& p : c.points) out.push_back({p, p});
      return out;
    case ShapeKind::Segment: {
      int moving_axes = 0;
      for (int i = 0; i < c.dim; ++i) {
        if (c.a[i] != c.b[i]) ++moving_axes;
      }
      if (moving_axes > 1) {
        throw std::invalid_argument(
            "product condensation needs axis-aligned segments");
      }
      Point lo = c.a, hi = c.a;
      for (int i = 0; i < c.dim; ++i) {
        lo[i] = std::min(c.a[i], c.b[i]);
        hi[i] = std::max(c.a[i], c.b[i]);
      }
      out.push_back({lo, hi});
      return out;
    }
    case ShapeKind::Box:
      out.push_back({c.a, c.b});
      return out;
    case ShapeKind::Union:
      for (const auto& part : c.parts) {
        auto sub = as_boxes(part);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    case ShapeKind::Circle:
    case ShapeKind::Disk:
      throw std::invalid_argument(
          "product condensation not representable for circles or disks");
  }
  return out;
}

Point concat(const Point& a, const Point& b) {
  Point p;
  p.dim = a.dim + b.dim;
  for (int i = 0; i < a.dim; ++i) p[i] = a[i];
  for (int i = 0; i < b.dim; ++i) p[a.dim + i] = b[i];
  return p;
}

}  // namespace

CondensationSet condensation_product(const CondensationSet& a,
                                     const CondensationSet& b) {
  if (a.is_empty || b.is_empty) return CondensationSet::empty(a.dim + b.dim);
  std::vector<BoxPart> pa = as_boxes(a);
  std::vector<BoxPart> pb = as_boxes(b);
  std::vector<CondensationSet> parts;
  std::vector<Point> loose_points;
  for (const auto& x : pa) {
    for (const auto& y : pb) {
      const Point lo = concat(x.lo, y.lo);
      const Point hi = concat(x.hi, y.hi);
      if (points_equal(lo, hi)) {
        loose_points.push_back(lo);
      } else {
        parts.push_back(CondensationSet::box(lo, hi));
      }
    }
  }
  if (!loose_points.empty()) {
    parts.push_back(CondensationSet::point_list(std::move(loose_points)));
  }
  return CondensationSet::union_of(std::move(parts));
}

ProductSpec product_system(const SystemSpec& a, const SystemSpec& b) {
  a.validate();
  b.validate();
  if (a.dim() + b.dim() > kMaxDim) {
    throw std::invalid_argument("product dimension exceeds 4");
  }
  if (!a.codespace.is_full_shift() || !b.codespace.is_full_shift()) {
    throw std::invalid_argument(
        "products are supported for full-shift factors only");
  }
  ProductSpec p;
  p.left = a;
  p.right = b;
  p.combined.ambient = box_product(a.ambient, b.ambient);
  p.combined.maps.reserve(a.maps.size() * b.maps.size());
  for (const auto& f : a.maps) {
    for (const auto& g : b.maps) {
      p.combined.maps.push_back(product_map(f, g));
    }
  }
  p.combined.codespace = Sft::full_shift(a.map_count() * b.map_count());
  p.combined.condensation = condensation_product(a.condensation, b.condensation);
  p.combined.osc_asserted = a.osc_asserted && b.osc_asserted;

  if (a.probabilities && b.probabilities) {
    const auto& pp = *a.probabilities;
    const auto& qq = *b.probabilities;
    const double p0 = pp[0];
    const double q0 = qq[0];
    p.condensation_weight = p0 + q0 - p0 * q0;
    std::vector<double> weights{p.condensation_weight};
    for (int i = 1; i <= a.map_count(); ++i) {
      for (int j = 1; j <= b.map_count(); ++j) {
        weights.push_back(pp[static_cast<size_t>(i)] * qq[static_cast<size_t>(j)]);
      }
    }
    p.combined.probabilities = std::move(weights);
  }
  p.combined.validate();
  return p;
}

// ---------------------------------------------------------------------------
// separation checks

SeparationReport check_issc(const SystemSpec& spec, double resolution,
                            double margin) {
  spec.validate();
  const PointCloud a = inhomogeneous_cloud(spec, resolution);
  if (a.points.empty()) throw std::invalid_argument("empty attractor cloud");

  std::vector<PointCloud> images(spec.maps.size());
  for (size_t i = 0; i < spec.maps.size(); ++i) {
    images[i].resolution = resolution;
    images[i].points.reserve(a.points.size());
    for (const auto& x : a.points) {
      images[i].points.push_back(apply(spec.maps[i], x));
    }
  }

  SeparationReport rep;
  rep.min_image_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < images.size(); ++i) {
    GridIndex index(images[i].points);
    for (size_t j = i + 1; j < images.size(); ++j) {
      double gap = std::numeric_limits<double>::infinity();
      for (const auto& x : images[j].points) {
        gap = std::min(gap, index.nearest_distance(x));
        if (gap == 0.0) break;
      }
      rep.min_image_gap = std::min(rep.min_image_gap, gap);
    }
  }
  if (images.size() == 1) rep.min_image_gap = std::numeric_limits<double>::infinity();

  rep.min_condensation_gap = std::numeric_limits<double>::infinity();
  if (!spec.condensation.is_empty) {
    const PointCloud cond = discretize(spec.condensation, resolution);
    GridIndex cond_index(cond.points);
    for (const auto& img : images) {
      for (const auto& x : img.points) {
        rep.min_condensation_gap =
            std::min(rep.min_condensation_gap, cond_index.nearest_distance(x));
      }
    }
  }
  rep.images_disjoint = rep.min_image_gap > margin;
  rep.images_avoid_condensation = rep.min_condensation_gap > margin;
  rep.passed = rep.images_disjoint && rep.images_avoid_condensation;
  return rep;
}

namespace {

bool axis_aligned(const Similarity& f) {
  for (int r = 0; r < f.dim; ++r) {
    int nonzero = 0;
    for (int c = 0; c < f.dim; ++c) {
      if (std::abs(f.linear_at(r, c)) > 1e-12) ++nonzero;
    }
    if (nonzero != 1) return false;
  }
  return true;
}

struct ImageBox {
  Point lo, hi;
};

ImageBox image_bbox(const Similarity& f, const AmbientBox& u) {
  ImageBox out;
  out.lo.dim = out.hi.dim = u.dim();
  for (int i = 0; i < u.dim(); ++i) {
    out.lo[i] = std::numeric_limits<double>::infinity();
    out.hi[i] = -std::numeric_limits<double>::infinity();
  }
  for (unsigned m = 0; m < (1u << u.dim()); ++m) {
    const Point p = apply(f, u.corner(m));
    for (int i = 0; i < u.dim(); ++i) {
      out.lo[i] = std::min(out.lo[i], p[i]);
      out.hi[i] = std::max(out.hi[i], p[i]);
    }
  }
  return out;
}

bool condensation_inside_closed_box(const CondensationSet& c,
                                    const AmbientBox& u) {
  switch (c.kind) {
    case ShapeKind::Empty:
      return true;
    case ShapeKind::PointList:
      for (const auto& p : c.points) {
        if (!u.contains(p, 1e-12)) return false;
      }
      return true;
    case ShapeKind::Segment:
      return u.contains(c.a, 1e-12) && u.contains(c.b, 1e-12);
    case ShapeKind::Circle:
    case ShapeKind::Disk:
      for (int i = 0; i < c.dim; ++i) {
        if (c.center[i] - c.radius < u.lo[i] - 1e-12) return false;
        if (c.center[i] + c.radius > u.hi[i] + 1e-12) return false;
      }
      return true;
    case ShapeKind::Box:
      return u.contains(c.a, 1e-12) && u.contains(c.b, 1e-12);
    case ShapeKind::Union:
      for (const auto& part : c.parts) {
        if (!condensation_inside_closed_box(part, u)) return false;
      }
      return true;
  }
  return false;
}

bool box_inside_condensation_closure(const AmbientBox& u,
                                     const CondensationSet& c) {
  switch (c.kind) {
    case ShapeKind::Empty:
    case ShapeKind::PointList:
    case ShapeKind::Circle:
      return false;  // no interior to hold an open box
    case ShapeKind::Segment: {
      if (u.dim() != 1 || c.dim != 1) return false;
      const double lo = std::min(c.a[0], c.b[0]);
      const double hi = std::max(c.a[0], c.b[0]);
      return u.lo[0] >= lo - 1e-12 && u.hi[0] <= hi + 1e-12;
    }
    case ShapeKind::Disk:
      for (unsigned m = 0; m < (1u << u.dim()); ++m) {
        if (dist(u.corner(m), c.center) > c.radius + 1e-12) return false;
      }
      return true;
    case ShapeKind::Box:
      for (int i = 0; i < u.dim(); ++i) {
        if (u.lo[i] < c.a[i] - 1e-12 || u.hi[i] > c.b[i] + 1e-12) return false;
      }
      return true;
    case ShapeKind::Union:
      for (const auto& part : c.parts) {
        if (box_inside_condensation_closure(u, part)) return true;
      }
      return false;  // sufficient test: inside one part
  }
  return false;
}

}  // namespace

OpenSetReport check_iosc(const SystemSpec& spec, const AmbientBox& u,
                         OscVariant variant) {
  spec.validate();
  for (int i = 0; i < u.dim(); ++i) {
    if (!(u.lo[i] < u.hi[i])) {
      throw std::invalid_argument("open set must be a nondegenerate box");
    }
  }
  OpenSetReport rep;

  rep.invariance = true;
  for (const auto& f : spec.maps) {
    if (!maps_into(f, u, 1e-12)) rep.invariance = false;
  }

  bool all_axis = true;
  for (const auto& f : spec.maps) all_axis &= axis_aligned(f);

  rep.images_disjoint = true;
  rep.margin = std::numeric_limits<double>::infinity();
  if (spec.maps.size() < 2) rep.margin = 0.0;
  if (all_axis) {
    // image boxes are exact; interiors overlap iff every axis overlaps with
    // positive length
    std::vector<ImageBox> boxes;
    boxes.reserve(spec.maps.size());
    for (const auto& f : spec.maps) boxes.push_back(image_bbox(f, u));
    for (size_t i = 0; i < boxes.size(); ++i) {
      for (size_t j = i + 1; j < boxes.size(); ++j) {
        bool overlap = true;
        double gap_sq = 0.0;
        for (int ax = 0; ax < u.dim(); ++ax) {
          const double inter = std::min(boxes[i].hi[ax], boxes[j].hi[ax]) -
                               std::max(boxes[i].lo[ax], boxes[j].lo[ax]);
          if (inter <= 1e-12) overlap = false;
          if (inter < 0.0) gap_sq += inter * inter;
        }
        if (overlap) rep.images_disjoint = false;
        rep.margin = std::min(rep.margin, std::sqrt(gap_sq));
      }
    }
  } else {
    // sampled pullback test on interior cell centres; touching boundaries do
    // not trigger, genuine interior overlap at grid scale does
    const int per_axis = std::max(4, static_cast<int>(std::floor(
                                         std::pow(4096.0, 1.0 / u.dim()))));
    std::vector<Point> samples;
    std::array<int, kMaxDim> idx{};
    while (true) {
      Point p;
      p.dim = u.dim();
      for (int i = 0; i < u.dim(); ++i) {
        p[i] = u.lo[i] + (idx[static_cast<size_t>(i)] + 0.5) *
                             (u.hi[i] - u.lo[i]) / per_axis;
      }
      samples.push_back(p);
      int axis = 0;
      while (axis < u.dim()) {
        if (++idx[static_cast<size_t>(axis)] < per_axis) break;
        idx[static_cast<size_t>(axis)] = 0;
        ++axis;
      }
      if (axis == u.dim()) break;
    }
    double max_cell = 0.0;
    for (int i = 0; i < u.dim(); ++i) {
      max_cell = std::max(max_cell, (u.hi[i] - u.lo[i]) / per_axis);
    }
    for (size_t i = 0; i < spec.maps.size() && rep.images_disjoint; ++i) {
      for (size_t j = 0; j < spec.maps.size() && rep.images_disjoint; ++j) {
        if (i == j) continue;
        const double slack = 0.5 * max_cell * spec.maps[i].ratio /
                                 spec.maps[j].ratio +
                             1e-12;
        for (const auto& q : samples) {
          const Point y = apply_inverse(spec.maps[j], apply(spec.maps[i], q));
          bool interior = true;
          for (int ax = 0; ax < u.dim(); ++ax) {
            if (y[ax] < u.lo[ax] + slack || y[ax] > u.hi[ax] - slack) {
              interior = false;
              break;
            }
          }
          if (interior) {
            rep.images_disjoint = false;
            break;
          }
        }
      }
    }
    rep.margin = 0.0;  // sampled path reports no exact gap
  }

  rep.condensation_clause =
      variant == OscVariant::AsStated
          ? box_inside_condensation_closure(u, spec.condensation)
          : condensation_inside_closed_box(spec.condensation, u);

  rep.passed = rep.invariance && rep.images_disjoint && rep.condensation_clause;
  return rep;
}

// ---------------------------------------------------------------------------
// chaos game

namespace {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}
  double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  size_t index(size_t n) {
    const size_t k = static_cast<size_t>(uniform() * static_cast<double>(n));
    return std::min(k, n - 1);
  }
};

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

Point sample_condensation(const CondensationSet& c, Rng& rng) {
  switch (c.kind) {
    case ShapeKind::Empty:
      throw std::invalid_argument("cannot sample the empty condensation set");
    case ShapeKind::PointList:
      return c.points[rng.index(c.points.size())];
    case ShapeKind::Segment: {
      const double t = rng.uniform();
      Point p;
      p.dim = c.dim;
      for (int i = 0; i < c.dim; ++i) p[i] = c.a[i] + t * (c.b[i] - c.a[i]);
      return p;
    }
    case ShapeKind::Circle: {
      const double t = 2.0 * M_PI * rng.uniform();
      Point p;
      p.dim = 2;
      p[0] = c.center[0] + c.radius * std::cos(t);
      p[1] = c.center[1] + c.radius * std::sin(t);
      return p;
    }
    case ShapeKind::Disk: {
      const double r = c.radius * std::sqrt(rng.uniform());
      const double t = 2.0 * M_PI * rng.uniform();
      Point p;
      p.dim = 2;
      p[0] = c.center[0] + r * std::cos(t);
      p[1] = c.center[1] + r * std::sin(t);
      return p;
    }
    case ShapeKind::Box: {
      Point p;
      p.dim = c.dim;
      for (int i = 0; i < c.dim; ++i) {
        p[i] = c.a[i] + rng.uniform() * (c.b[i] - c.a[i]);
      }
      return p;
    }
    case ShapeKind::Union:
      return sample_condensation(c.parts[rng.index(c.parts.size())], rng);
  }
  throw std::logic_error("unreachable");
}

// one chaos-game transition; probabilities = (p_0, p_1..p_N)
Point chaos_step(const SystemSpec& spec, const std::vector<double>& prob,
                 const Point& x, Rng& rng) {
  double u = rng.uniform();
  if (u < prob[0]) return sample_condensation(spec.condensation, rng);
  u -= prob[0];
  for (size_t i = 1; i < prob.size(); ++i) {
    if (u < prob[i] || i + 1 == prob.size()) {
      return apply(spec.maps[i - 1], x);
    }
    u -= prob[i];
  }
  return apply(spec.maps.back(), x);
}

}  // namespace

MeasureSample chaos_game(const SystemSpec& spec, int n, int burn,
                         uint64_t seed) {
  spec.validate();
  if (!spec.probabilities) {
    throw std::invalid_argument("chaos game needs a probability vector");
  }
  if (n < 1 || burn < 0) throw std::invalid_argument("bad sample counts");
  const auto& prob = *spec.probabilities;
  if (prob[0] > 0.0 && spec.condensation.is_empty) {
    throw std::invalid_argument(
        "positive condensation weight with empty condensation set");
  }
  Rng rng(seed);
  Point x = spec.ambient.center();
  MeasureSample sample;
  sample.seed = seed;
  sample.burn_in = burn;
  sample.n = n;
  sample.points.reserve(static_cast<size_t>(n));
  for (int step = 0; step < burn + n; ++step) {
    x = chaos_step(spec, prob, x, rng);
    if (step >= burn) sample.points.push_back(x);
  }
  return sample;
}

// ---------------------------------------------------------------------------
// product measure comparison

namespace {

std::vector<std::array<int, kMaxDim>> moment_indices(int dim, int max_order) {
  std::vector<std::array<int, kMaxDim>> out;
  std::array<int, kMaxDim> alpha{};
  // enumerate all multi-indices with 1 <= |alpha| <= max_order
  const std::function<void(int, int)> rec = [&](int axis, int remaining) {
    if (axis == dim) {
      int total = 0;
      for (int v : alpha) total += v;
      if (total >= 1) out.push_back(alpha);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      alpha[static_cast<size_t>(axis)] = v;
      rec(axis + 1, remaining - v);
    }
    alpha[static_cast<size_t>(axis)] = 0;
  };
  rec(0, max_order);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int ta = 0, tb = 0;
    for (int v : a) ta += v;
    for (int v : b) tb += v;
    if (ta != tb) return ta < tb;
    return a < b;
  });
  return out;
}

std::string moment_name(const std::array<int, kMaxDim>& alpha, int dim) {
  std::string name;
  for (int i = 0; i < dim; ++i) {
    const int v = alpha[static_cast<size_t>(i)];
    if (v == 0) continue;
    if (!name.empty()) name += "*";
    name += "x" + std::to_string(i);
    if (v > 1) name += "^" + std::to_string(v);
  }
  return name;
}

double monomial(const Point& p, const std::array<int, kMaxDim>& alpha) {
  double v = 1.0;
  for (int i = 0; i < p.dim; ++i) {
    for (int k = 0; k < alpha[static_cast<size_t>(i)]; ++k) v *= p[i];
  }
  return v;
}

struct MomentAccum {
  std::vector<double> sum, sum_sq;
  explicit MomentAccum(size_t k) : sum(k, 0.0), sum_sq(k, 0.0) {}
  void add(const Point& p,
           const std::vector<std::array<int, kMaxDim>>& idx) {
    for (size_t m = 0; m < idx.size(); ++m) {
      const double v = monomial(p, idx[m]);
      sum[m] += v;
      sum_sq[m] += v * v;
    }
  }
};

}  // namespace

MeasureComparison product_measure_check(const ProductSpec& p, int n,
                                        uint64_t seed, int max_order) {
  if (!p.left.probabilities || !p.right.probabilities ||
      !p.combined.probabilities) {
    throw std::invalid_argument("both factors need probability vectors");
  }
  if (n < 1 || max_order < 1) throw std::invalid_argument("bad parameters");
  const int burn = 1024;
  const int d1 = p.left.dim();
  const int d2 = p.right.dim();
  const int d = d1 + d2;
  const auto idx = moment_indices(d, max_order);

  MeasureComparison cmp;
  cmp.condensation_weight = p.condensation_weight;
  {
    double total = 0.0;
    for (double w : *p.combined.probabilities) total += w;
    cmp.weight_sum_error = std::abs(total - 1.0);
  }

  // sampler A: independent pair of factor chains
  MomentAccum acc_a(idx.size());
  {
    Rng left(splitmix64(seed ^ 0x1111111111111111ull));
    Rng right(splitmix64(seed ^ 0x2222222222222222ull));
    Point x = p.left.ambient.center();
    Point y = p.right.ambient.center();
    const auto& pp = *p.left.probabilities;
    const auto& qq = *p.right.probabilities;
    for (int step = 0; step < burn + n; ++step) {
      x = chaos_step(p.left, pp, x, left);
      y = chaos_step(p.right, qq, y, right);
      if (step >= burn) acc_a.add(concat(x, y), idx);
    }
  }

  // sampler B: combined chain with the decomposition's condensation mixture;
  // auxiliary factor chains supply the pushforward draws
  MomentAccum acc_b(idx.size());
  {
    Rng main(splitmix64(seed ^ 0x3333333333333333ull));
    Rng aux_left(splitmix64(seed ^ 0x4444444444444444ull));
    Rng aux_right(splitmix64(seed ^ 0x5555555555555555ull));
    const auto& pp = *p.left.probabilities;
    const auto& qq = *p.right.probabilities;
    const double p0 = pp[0];
    const double q0 = qq[0];
    const double w0 = p.condensation_weight;
    const int nn = p.left.map_count();
    const int mm = p.right.map_count();

    Point ax = p.left.ambient.center();
    Point ay = p.right.ambient.center();
    Point z = concat(ax, ay);
    for (int step = 0; step < burn + n; ++step) {
      ax = chaos_step(p.left, pp, ax, aux_left);
      ay = chaos_step(p.right, qq, ay, aux_right);
      double u = main.uniform();
      if (u < w0 && w0 > 0.0) {
        // mixture: p_i q0 parts push the left invariant measure through f_i,
        // p0 q_j parts push the right one through g_j, p0 q0 pairs both
        // condensation measures
        double v = main.uniform() * w0;
        Point zx, zy;
        bool chosen = false;
        for (int i = 1; i <= nn && !chosen; ++i) {
          const double w = pp[static_cast<size_t>(i)] * q0;
          if (v < w) {
            zx = apply(p.left.maps[static_cast<size_t>(i - 1)], ax);
            zy = sample_condensation(p.right.condensation, main);
            chosen = true;
          } else {
            v -= w;
          }
        }
        for (int j = 1; j <= mm && !chosen; ++j) {
          const double w = p0 * qq[static_cast<size_t>(j)];
          if (v < w) {
            zx = sample_condensation(p.left.condensation, main);
            zy = apply(p.right.maps[static_cast<size_t>(j - 1)], ay);
            chosen = true;
          } else {
            v -= w;
          }
        }
        if (!chosen) {
          zx = sample_condensation(p.left.condensation, main);
          zy = sample_condensation(p.right.condensation, main);
        }
        z = concat(zx, zy);
      } else {
        // pair weights r_ij = p_i q_j, selected as independent marginals
        double v = (u - w0) / (1.0 - w0);
        int i = nn;
        double acc = 0.0;
        const double psum = 1.0 - p0;
        const double qsum = 1.0 - q0;
        for (int c = 1; c <= nn; ++c) {
          acc += pp[static_cast<size_t>(c)] / psum;
          if (v < acc) {
            i = c;
            break;
          }
        }
        double v2 = main.uniform();
        int j = mm;
        acc = 0.0;
        for (int c = 1; c <= mm; ++c) {
          acc += qq[static_cast<size_t>(c)] / qsum;
          if (v2 < acc) {
            j = c;
            break;
          }
        }
        Point zx, zy;
        zx.dim = d1;
        zy.dim = d2;
        for (int c = 0; c < d1; ++c) zx[c] = z[c];
        for (int c = 0; c < d2; ++c) zy[c] = z[d1 + c];
        z = concat(apply(p.left.maps[static_cast<size_t>(i - 1)], zx),
                   apply(p.right.maps[static_cast<size_t>(j - 1)], zy));
      }
      if (step >= burn) acc_b.add(z, idx);
    }
  }

  const double dn = static_cast<double>(n);
  cmp.passed = true;
  for (size_t m = 0; m < idx.size(); ++m) {
    MomentRow row;
    row.name = moment_name(idx[m], d);
    row.mean_independent = acc_a.sum[m] / dn;
    row.mean_decomposed = acc_b.sum[m] / dn;
    row.diff = row.mean_independent - row.mean_decomposed;
    const double var_a =
        std::max(0.0, acc_a.sum_sq[m] / dn - row.mean_independent * row.mean_independent);
    const double var_b =
        std::max(0.0, acc_b.sum_sq[m] / dn - row.mean_decomposed * row.mean_decomposed);
    row.stderr_combined = std::sqrt(var_a / dn + var_b / dn);
    row.pass = row.stderr_combined > 0.0
                   ? std::abs(row.diff) <= 4.0 * row.stderr_combined
                   : row.diff == 0.0;
    cmp.passed &= row.pass;
    cmp.rows.push_back(std::move(row));
  }
  return cmp;
}

}  // namespace ifs

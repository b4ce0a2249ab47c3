#include "ifs/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace ifs {

RatioVector SystemSpec::ratio_vector() const {
  std::vector<double> r;
  r.reserve(maps.size());
  for (const auto& f : maps) r.push_back(f.ratio);
  return RatioVector(std::move(r));
}

void SystemSpec::validate() const {
  if (maps.empty()) throw std::invalid_argument("system needs at least one map");
  if (codespace.alphabet_size() != map_count()) {
    throw std::invalid_argument("code-space alphabet size must match map count");
  }
  for (const auto& f : maps) {
    if (f.dim != dim()) throw std::invalid_argument("map dimension mismatch");
    if (!(f.ratio > 0.0) || !(f.ratio < 1.0)) {
      throw std::invalid_argument("map is not a contraction");
    }
    if (!maps_into(f, ambient)) {
      throw std::invalid_argument("map does not send the ambient box into itself");
    }
  }
  if (condensation.dim != dim() && !condensation.is_empty) {
    throw std::invalid_argument("condensation dimension mismatch");
  }
  if (!condensation.inside(ambient)) {
    throw std::invalid_argument("condensation set leaves the ambient box");
  }
  if (probabilities) {
    if (static_cast<int>(probabilities->size()) != map_count() + 1) {
      throw std::invalid_argument("probability vector must have N+1 entries");
    }
    double sum = 0.0;
    for (double p : *probabilities) {
      if (p < 0.0) throw std::invalid_argument("probabilities must be >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("probabilities must sum to 1");
    }
  }
}

// ---------------------------------------------------------------------------
// cloud builders

namespace {

// first point kept per cell at resolution/2; cell diameter stays below the
// cloud resolution for d <= 4
struct Thinner {
  double cell;
  Point anchor;
  std::unordered_map<uint64_t, uint8_t> seen;

  bool keep(const Point& p) {
    uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < p.dim; ++i) {
      const auto v =
          static_cast<int64_t>(std::floor((p[i] - anchor[i]) / cell));
      h ^= static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return seen.emplace(h, 1).second;
  }
};

// DFS over the subshift, one address point per stopping word
void emit_theta_points(const SystemSpec& spec, const Sft& shift, double delta,
                       std::vector<Point>& out, Thinner* thin) {
  const Point x0 = spec.ambient.center();
  const RatioVector ratios = spec.ratio_vector();
  std::vector<Similarity> stack{Similarity::identity(spec.dim())};
  Word w;
  std::vector<int> next{1};
  while (!next.empty()) {
    int& sym = next.back();
    const int depth = static_cast<int>(next.size()) - 1;
    bool descended = false;
    while (sym <= shift.alphabet_size()) {
      const int cand = sym++;
      const bool admissible = depth == 0 ? shift.is_initial(cand)
                                         : shift.allows(w.symbols.back(), cand);
      if (!admissible) continue;
      const Similarity comp =
          compose(stack.back(), spec.maps[static_cast<size_t>(cand - 1)]);
      if (comp.ratio < delta) {
        const Point p = apply(comp, x0);
        if (!thin || thin->keep(p)) {
          out.push_back(p);
          if (out.size() > kPointCap) {
            throw std::length_error("stopping set exceeds the point cap");
          }
        }
        continue;
      }
      w.symbols.push_back(cand);
      stack.push_back(comp);
      next.push_back(1);
      descended = true;
      break;
    }
    if (!descended) {
      next.pop_back();
      if (!next.empty()) {
        w.symbols.pop_back();
        stack.pop_back();
      }
    }
  }
}

PointCloud build_address_cloud(const SystemSpec& spec, const Sft& shift,
                               double resolution) {
  spec.validate();
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("resolution must be positive");
  }
  const double diam = spec.ambient.diameter();
  const double delta = diam > 0.0 ? std::min(1.0, resolution / diam) : 1.0;
  PointCloud cloud;
  cloud.resolution = resolution;
  if (shift.empty_language()) return cloud;
  try {
    emit_theta_points(spec, shift, delta, cloud.points, nullptr);
  } catch (const std::length_error&) {
    cloud.points.clear();
    Thinner thin{resolution / 2.0, spec.ambient.lo, {}};
    emit_theta_points(spec, shift, delta, cloud.points, &thin);
  }
  sort_points(cloud.points);
  return cloud;
}

// images of the condensation mesh under every composition whose parent ratio
// is still >= delta (so the first sub-delta words are included too)
void emit_orbit_points(const SystemSpec& spec, double delta,
                       const std::vector<Point>& mesh, std::vector<Point>& out,
                       Thinner* thin) {
  std::vector<Similarity> stack{Similarity::identity(spec.dim())};
  Word w;
  std::vector<int> next{1};
  const auto emit = [&](const Similarity& comp) {
    for (const auto& c : mesh) {
      const Point p = apply(comp, c);
      if (!thin || thin->keep(p)) {
        out.push_back(p);
        if (out.size() > kPointCap) {
          throw std::length_error("orbit exceeds the point cap");
        }
      }
    }
  };
  while (!next.empty()) {
    int& sym = next.back();
    const int depth = static_cast<int>(next.size()) - 1;
    bool descended = false;
    while (sym <= spec.codespace.alphabet_size()) {
      const int cand = sym++;
      const bool admissible =
          depth == 0 ? spec.codespace.is_initial(cand)
                     : spec.codespace.allows(w.symbols.back(), cand);
      if (!admissible) continue;
      const Similarity comp =
          compose(stack.back(), spec.maps[static_cast<size_t>(cand - 1)]);
      emit(comp);
      if (comp.ratio >= delta) {
        w.symbols.push_back(cand);
        stack.push_back(comp);
        next.push_back(1);
        descended = true;
        break;
      }
    }
    if (!descended) {
      next.pop_back();
      if (!next.empty()) {
        w.symbols.pop_back();
        stack.pop_back();
      }
    }
  }
}

}  // namespace

PointCloud attractor_cloud(const SystemSpec& spec, double resolution) {
  return build_address_cloud(spec, Sft::full_shift(spec.map_count()),
                             resolution);
}

PointCloud subshift_cloud(const SystemSpec& spec, double resolution) {
  const auto closure = validate_shift_closed(spec.codespace);
  if (!closure.ok) {
    throw std::invalid_argument("code space is not closed under the shift");
  }
  return build_address_cloud(spec, spec.codespace, resolution);
}

PointCloud orbit_cloud(const SystemSpec& spec, double resolution) {
  spec.validate();
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("resolution must be positive");
  }
  PointCloud cloud;
  cloud.resolution = resolution;
  if (spec.condensation.is_empty) return cloud;

  const PointCloud mesh = discretize(spec.condensation, resolution / 2.0);
  const double diam = spec.ambient.diameter();
  const double delta =
      diam > 0.0 ? std::min(1.0, resolution / (2.0 * diam)) : 1.0;
  cloud.points = mesh.points;  // the condensation set itself
  try {
    emit_orbit_points(spec, delta, mesh.points, cloud.points, nullptr);
  } catch (const std::length_error&) {
    cloud.points.clear();
    Thinner thin{resolution / 2.0, spec.ambient.lo, {}};
    for (const auto& p : mesh.points) {
      if (thin.keep(p)) cloud.points.push_back(p);
    }
    emit_orbit_points(spec, delta, mesh.points, cloud.points, &thin);
  }
  sort_points(cloud.points);
  return cloud;
}

PointCloud inhomogeneous_cloud(const SystemSpec& spec, double resolution) {
  PointCloud e = subshift_cloud(spec, resolution);
  PointCloud o = orbit_cloud(spec, resolution);
  PointCloud cloud;
  cloud.resolution = resolution;
  cloud.points = std::move(e.points);
  cloud.points.insert(cloud.points.end(), o.points.begin(), o.points.end());
  sort_points(cloud.points);
  cloud.points.erase(std::unique(cloud.points.begin(), cloud.points.end(),
                                 points_equal),
                     cloud.points.end());
  return cloud;
}

// ---------------------------------------------------------------------------
// verification

VerificationReport verify_inclusion(const PointCloud& f,
                                    const SystemSpec& spec, double tol) {
  if (f.points.empty()) throw std::invalid_argument("empty cloud");
  if (tol < 2.0 * f.resolution) {
    throw std::invalid_argument("tolerance below twice the cloud resolution");
  }
  const double cond_eps = f.resolution > 0.0 ? f.resolution : tol / 2.0;
  PointCloud cond = spec.condensation.is_empty
                        ? PointCloud{}
                        : discretize(spec.condensation, cond_eps);

  bool invertible_only = true;
  for (const auto& m : spec.maps) invertible_only &= m.exact_similarity;

  VerificationReport rep;
  rep.tolerance = tol;

  if (invertible_only) {
    // dist(x, f_i(F)) = ratio_i * dist(f_i^{-1}(x), F) for exact similarities
    GridIndex base(f.points);
    std::optional<GridIndex> cond_index;
    if (!cond.points.empty()) cond_index.emplace(cond.points);
    for (const auto& x : f.points) {
      double best = cond_index ? cond_index->nearest_distance(x)
                               : std::numeric_limits<double>::infinity();
      for (const auto& m : spec.maps) {
        best = std::min(best,
                        m.ratio * base.nearest_distance(apply_inverse(m, x)));
        if (best == 0.0) break;
      }
      rep.worst_gap = std::max(rep.worst_gap, best);
    }
  } else {
    std::vector<Point> images = cond.points;
    images.reserve(cond.points.size() + spec.maps.size() * f.points.size());
    for (const auto& m : spec.maps) {
      for (const auto& x : f.points) images.push_back(apply(m, x));
    }
    GridIndex index(images);
    for (const auto& x : f.points) {
      rep.worst_gap = std::max(rep.worst_gap, index.nearest_distance(x));
    }
  }
  rep.passed = rep.worst_gap <= tol;
  return rep;
}

bool verify_closure(const PointCloud& e, const PointCloud& o, double tol) {
  if (o.points.empty()) throw std::invalid_argument("empty orbit cloud");
  if (e.points.empty()) return true;
  return directed_hausdorff(e, o) <= tol;
}

PointCloud minimal_condensation(const PointCloud& e,
                                const std::vector<Similarity>& maps,
                                double tol) {
  if (e.points.empty()) throw std::invalid_argument("empty cloud");
  if (tol < 2.0 * e.resolution) {
    throw std::invalid_argument("tolerance below twice the cloud resolution");
  }
  bool invertible_only = true;
  for (const auto& m : maps) invertible_only &= m.exact_similarity;

  PointCloud out;
  out.resolution = e.resolution;
  if (invertible_only) {
    GridIndex base(e.points);
    for (const auto& x : e.points) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& m : maps) {
        best = std::min(best,
                        m.ratio * base.nearest_distance(apply_inverse(m, x)));
      }
      if (best > tol) out.points.push_back(x);
    }
  } else {
    std::vector<Point> images;
    images.reserve(maps.size() * e.points.size());
    for (const auto& m : maps) {
      for (const auto& x : e.points) images.push_back(apply(m, x));
    }
    GridIndex index(images);
    for (const auto& x : e.points) {
      if (index.nearest_distance(x) > tol) out.points.push_back(x);
    }
  }
  sort_points(out.points);
  return out;
}

// ---------------------------------------------------------------------------
// derived systems

SystemSpec union_systems(const SystemSpec& a, const SystemSpec& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  SystemSpec out;
  out.maps = a.maps;
  out.maps.insert(out.maps.end(), b.maps.begin(), b.maps.end());
  out.ambient = box_union(a.ambient, b.ambient);
  for (const auto& f : out.maps) {
    if (!maps_into(f, out.ambient)) {
      throw std::invalid_argument(
          "combined ambient box is not invariant under all maps");
    }
  }

  const int na = a.map_count();
  const int nb = b.map_count();
  if (a.codespace.is_full_shift() && b.codespace.is_full_shift()) {
    out.codespace = Sft::full_shift(na + nb);
  } else {
    std::vector<std::vector<int>> t(
        static_cast<size_t>(na + nb),
        std::vector<int>(static_cast<size_t>(na + nb), 0));
    std::vector<int> initial;
    for (int i = 1; i <= na; ++i) {
      for (int j = 1; j <= na; ++j) {
        t[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] =
            a.codespace.allows(i, j) ? 1 : 0;
      }
      if (a.codespace.is_initial(i)) initial.push_back(i);
    }
    for (int i = 1; i <= nb; ++i) {
      for (int j = 1; j <= nb; ++j) {
        t[static_cast<size_t>(na + i - 1)][static_cast<size_t>(na + j - 1)] =
            b.codespace.allows(i, j) ? 1 : 0;
      }
      if (b.codespace.is_initial(i)) initial.push_back(na + i);
    }
    out.codespace = Sft(na + nb, t, initial);
  }

  std::vector<CondensationSet> parts;
  if (!a.condensation.is_empty) parts.push_back(a.condensation);
  if (!b.condensation.is_empty) parts.push_back(b.condensation);
  out.condensation = parts.empty() ? CondensationSet::empty(a.dim())
                                   : CondensationSet::union_of(std::move(parts));
  out.probabilities.reset();
  out.osc_asserted = false;
  return out;
}

SystemSpec power_system(const SystemSpec& spec, int k) {
  if (k < 1) throw std::invalid_argument("power must be >= 1");
  spec.validate();
  const std::vector<Word> words = level_words(spec.codespace, k);
  if (words.empty()) throw std::invalid_argument("empty level set");
  if (static_cast<int>(words.size()) > kPowerMapCap) {
    throw std::length_error("level alphabet exceeds the map cap");
  }
  SystemSpec out;
  out.ambient = spec.ambient;
  out.condensation = spec.condensation;
  out.osc_asserted = spec.osc_asserted;
  out.maps.reserve(words.size());
  for (const auto& w : words) {
    Similarity comp = Similarity::identity(spec.dim());
    for (int sym : w.symbols) {
      comp = compose(comp, spec.maps[static_cast<size_t>(sym - 1)]);
    }
    out.maps.push_back(comp);
  }
  const int n = static_cast<int>(words.size());
  std::vector<std::vector<int>> t(static_cast<size_t>(n),
                                  std::vector<int>(static_cast<size_t>(n), 0));
  std::vector<int> initial;
  for (int u = 0; u < n; ++u) {
    initial.push_back(u + 1);
    const int last = words[static_cast<size_t>(u)].symbols.back();
    for (int v = 0; v < n; ++v) {
      const int first = words[static_cast<size_t>(v)].symbols.front();
      t[static_cast<size_t>(u)][static_cast<size_t>(v)] =
          spec.codespace.allows(last, first) ? 1 : 0;
    }
  }
  out.codespace = Sft(n, t, initial);
  const auto closure = validate_shift_closed(out.codespace);
  if (!closure.ok) {
    throw std::logic_error("power system lost shift closure");
  }
  return out;
}

ContinuityReport continuity_report(const SystemSpec& spec, int k_max) {
  if (k_max < 2) throw std::invalid_argument("k_max must be >= 2");
  const RatioVector ratios = spec.ratio_vector();
  const double dim_c = spec.condensation.hausdorff_dim;
  ContinuityReport rep;
  for (int k = 1; k <= k_max; ++k) {
    const double s_k = moran_root(spec.codespace, ratios, k, 1e-9).value;
    rep.rows.push_back({k, s_k, std::max(s_k, dim_c)});
  }
  rep.limit_s = rep.rows.back().s_k;
  rep.limit_dim = std::max(rep.limit_s, dim_c);
  return rep;
}

}  // namespace ifs

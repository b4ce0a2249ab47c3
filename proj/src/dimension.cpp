#include "ifs/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ifs {

double level_sum(const Sft& s, const RatioVector& r, int k, double exponent) {
  if (k < 1) throw std::invalid_argument("level must be >= 1");
  if (r.size() != s.alphabet_size()) {
    throw std::invalid_argument("ratio vector size mismatch");
  }
  const int n = s.alphabet_size();
  std::vector<double> pw(static_cast<size_t>(n));
  for (int j = 1; j <= n; ++j) {
    pw[static_cast<size_t>(j - 1)] = std::pow(r.at(j), exponent);
  }
  std::vector<double> v(static_cast<size_t>(n), 0.0);
  for (int j = 1; j <= n; ++j) {
    if (s.is_initial(j)) v[static_cast<size_t>(j - 1)] = pw[static_cast<size_t>(j - 1)];
  }
  std::vector<double> next(static_cast<size_t>(n));
  for (int m = 1; m < k; ++m) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 1; i <= n; ++i) {
      const double vi = v[static_cast<size_t>(i - 1)];
      if (vi == 0.0) continue;
      for (int j = 1; j <= n; ++j) {
        if (s.allows(i, j)) {
          next[static_cast<size_t>(j - 1)] += vi * pw[static_cast<size_t>(j - 1)];
        }
      }
    }
    v.swap(next);
  }
  double total = 0.0;
  for (double x : v) total += x;
  return total;
}

double level_count(const Sft& s, const RatioVector& r, int k) {
  return level_sum(s, r, k, 0.0);
}

MoranRoot moran_root(const Sft& s, const RatioVector& r, int k, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const double count = level_count(s, r, k);
  if (count < 0.5) return MoranRoot{0.0, true};
  if (count < 1.5) return MoranRoot{0.0, false};  // single word, g(0) = 0

  // g(t) = level_sum(k, t) - 1 decreases strictly; the upper bracket follows
  // from level_sum <= count * rho_max^(k t)
  double lo = 0.0;
  double hi = std::log(count) / (k * std::log(1.0 / r.rho_max));
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double g = level_sum(s, r, k, mid) - 1.0;
    if (g > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  if (std::abs(level_sum(s, r, k, root) - 1.0) > tol) {
    throw std::runtime_error("moran root did not reach requested tolerance");
  }
  return MoranRoot{root, false};
}

MoranSequence dim_limit(const Sft& s, const RatioVector& r, int k_max,
                        double tol) {
  if (k_max < 2) throw std::invalid_argument("k_max must be >= 2");
  MoranSequence seq;
  seq.bracket_tolerance = tol;
  for (int k = 1; k <= k_max; ++k) {
    seq.s_values.emplace_back(k, moran_root(s, r, k, tol).value);
  }
  seq.s_estimate = seq.s_values.back().second;
  const double prev = seq.s_values[static_cast<size_t>(k_max - 2)].second;
  seq.converged = std::abs(seq.s_estimate - prev) < tol;
  return seq;
}

std::vector<std::pair<int, double>> tau(const Sft& s, const RatioVector& r,
                                        double exponent, int k_max) {
  if (exponent < 0.0) throw std::invalid_argument("exponent must be >= 0");
  std::vector<std::pair<int, double>> out;
  for (int k = 1; k <= k_max; ++k) {
    out.emplace_back(k, std::pow(level_sum(s, r, k, exponent), 1.0 / k));
  }
  return out;
}

// ---------------------------------------------------------------------------
// spectral oracle

namespace {

double spectral_radius(const Sft& s, const RatioVector& r, double exponent) {
  const int n = s.alphabet_size();
  std::vector<double> pw(static_cast<size_t>(n));
  for (int j = 1; j <= n; ++j) {
    pw[static_cast<size_t>(j - 1)] = std::pow(r.at(j), exponent);
  }
  std::vector<double> v(static_cast<size_t>(n), 0.0);
  int alive = 0;
  for (int j = 1; j <= n; ++j) {
    if (s.is_alive(j)) {
      v[static_cast<size_t>(j - 1)] = 1.0;
      ++alive;
    }
  }
  if (alive == 0) return 0.0;
  double lambda = 0.0;
  std::vector<double> next(static_cast<size_t>(n));
  for (int it = 0; it < 20000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 1; i <= n; ++i) {
      const double vi = v[static_cast<size_t>(i - 1)];
      if (vi == 0.0) continue;
      for (int j = 1; j <= n; ++j) {
        if (s.allows(i, j)) {
          next[static_cast<size_t>(j - 1)] += vi * pw[static_cast<size_t>(j - 1)];
        }
      }
    }
    double norm = 0.0;
    for (double x : next) norm += x;
    if (norm == 0.0) return 0.0;  // nilpotent
    const double prev = lambda;
    lambda = norm;  // v was L1-normalized
    for (auto& x : next) x /= norm;
    v.swap(next);
    if (it > 32 && std::abs(lambda - prev) <= 1e-14 * std::max(1.0, lambda)) {
      break;
    }
  }
  return lambda;
}

bool strongly_connected(const Sft& s) {
  const int n = s.alphabet_size();
  std::vector<int> alive;
  for (int i = 1; i <= n; ++i) {
    if (s.is_alive(i)) alive.push_back(i);
  }
  if (alive.empty()) return false;
  const auto reaches = [&](int start, bool forward) {
    std::vector<uint8_t> seen(static_cast<size_t>(n + 1), 0);
    std::vector<int> stack{start};
    seen[static_cast<size_t>(start)] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int w : alive) {
        const bool edge = forward ? s.allows(u, w) : s.allows(w, u);
        if (edge && !seen[static_cast<size_t>(w)]) {
          seen[static_cast<size_t>(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    for (int w : alive) {
      if (!seen[static_cast<size_t>(w)]) return false;
    }
    return true;
  };
  return reaches(alive.front(), true) && reaches(alive.front(), false);
}

}  // namespace

SpectralResult spectral_dim(const Sft& s, const RatioVector& r, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  SpectralResult res;
  res.irreducible = strongly_connected(s);
  const double at_zero = spectral_radius(s, r, 0.0);
  if (at_zero <= 1.0 + 1e-12) {
    res.s = 0.0;  // at most one path per length
    return res;
  }
  double lo = 0.0;
  double hi = std::log(at_zero) / std::log(1.0 / r.rho_max) + 1.0;
  while (spectral_radius(s, r, hi) > 1.0) hi += 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (spectral_radius(s, r, mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  res.s = 0.5 * (lo + hi);
  if (std::abs(spectral_radius(s, r, res.s) - 1.0) > tol) {
    throw std::runtime_error("spectral bisection did not reach tolerance");
  }
  return res;
}

TailMass tail_mass(const Sft& s, const RatioVector& r, double t, int K) {
  if (K < 3) throw std::invalid_argument("K must be >= 3");
  std::vector<double> a(static_cast<size_t>(K + 1), 0.0);
  double lower = 0.0;
  for (int k = 1; k <= K; ++k) {
    a[static_cast<size_t>(k)] = level_sum(s, r, k, t);
    lower += a[static_cast<size_t>(k)];
  }
  const double tau_k = std::pow(a[static_cast<size_t>(K)], 1.0 / K);
  if (tau_k >= 1.0) {
    throw std::domain_error("series diverges: exponent at or below dimension");
  }
  if (a[static_cast<size_t>(K)] == 0.0) return TailMass{lower, lower};
  // geometric tail with the growth factor read off the last few level ratios
  double q = 0.0;
  for (int k = std::max(1, K - 3); k < K; ++k) {
    if (a[static_cast<size_t>(k)] > 0.0) {
      q = std::max(q, a[static_cast<size_t>(k + 1)] / a[static_cast<size_t>(k)]);
    }
  }
  if (q >= 1.0) {
    throw std::domain_error("level sums not yet decaying at this exponent");
  }
  const double tail = a[static_cast<size_t>(K)] * q / (1.0 - q);
  return TailMass{lower, lower + tail};
}

DimensionReport dimension_report(double s, const CondensationSet& c,
                                 double lower_box_e, double upper_box_e,
                                 bool osc_asserted) {
  if (s < 0.0) throw std::invalid_argument("dimension must be >= 0");
  DimensionReport rep;
  rep.s = s;
  rep.hausdorff = std::max(s, c.hausdorff_dim);
  rep.box_upper_bound = std::max(s, c.upper_box_dim);
  rep.box_lower_bound = std::max(lower_box_e, c.lower_box_dim);
  if (c.lower_box_dim == c.upper_box_dim) {
    rep.box_exact = std::max(s, c.upper_box_dim);
  }
  rep.upper_bounds_only = !osc_asserted;
  rep.measured_lower_box = lower_box_e;
  rep.measured_upper_box = upper_box_e;
  return rep;
}

}  // namespace ifs

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ifs/codespace.hpp"
#include "ifs/geometry.hpp"

namespace ifs {

// Sum over level-k admissible words of ratio(w)^s, computed by the transfer
// recurrence v_{m+1}[j] = sum_i v_m[i] T[i][j] rho_j^s; identical to direct
// enumeration without materializing the level.
double level_sum(const Sft& s, const RatioVector& r, int k, double exponent);
double level_count(const Sft& s, const RatioVector& r, int k);

// Root of g_k(t) = level_sum(k, t) - 1, bisected on a bracket that g_k is
// guaranteed to sign-change over.  Empty levels report dimension 0.
struct MoranRoot {
  double value = 0.0;
  bool empty_level = false;
};
MoranRoot moran_root(const Sft& s, const RatioVector& r, int k, double tol);

struct MoranSequence {
  std::vector<std::pair<int, double>> s_values;
  double s_estimate = 0.0;
  bool converged = false;
  double bracket_tolerance = 0.0;
};
MoranSequence dim_limit(const Sft& s, const RatioVector& r, int k_max,
                        double tol);

// Finite-k approximants tau_k = level_sum(k, s)^(1/k).
std::vector<std::pair<int, double>> tau(const Sft& s, const RatioVector& r,
                                        double exponent, int k_max);

// Independent oracle: bisects the spectral radius of M(s)[i][j] =
// T[i][j] * rho_j^s to 1, spectral radius by power iteration.
struct SpectralResult {
  double s = 0.0;
  bool irreducible = true;  // restricted to alive symbols
};
SpectralResult spectral_dim(const Sft& s, const RatioVector& r, double tol);

// Interval bracketing sum over all admissible words of ratio(w)^t: partial
// sum over levels <= K plus a geometric tail bound.  Throws when the level
// sums do not certify convergence (t at or below the code-space dimension).
struct TailMass {
  double lower = 0.0;
  double upper = 0.0;
};
TailMass tail_mass(const Sft& s, const RatioVector& r, double t, int K);

struct DimensionReport {
  double s = 0.0;              // code-space dimension of the subshift image
  double hausdorff = 0.0;      // max(s, hausdorff dim of condensation)
  double box_lower_bound = 0.0;
  double box_upper_bound = 0.0;
  std::optional<double> box_exact;  // set when the condensation box dims agree
  std::vector<std::pair<int, double>> tau_at_s;
  bool upper_bounds_only = false;  // separation condition not asserted
  double measured_lower_box = 0.0;
  double measured_upper_box = 0.0;
};
DimensionReport dimension_report(double s, const CondensationSet& c,
                                 double lower_box_e, double upper_box_e,
                                 bool osc_asserted);

}  // namespace ifs

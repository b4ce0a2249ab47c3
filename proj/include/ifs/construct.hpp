#pragma once

#include <optional>
#include <vector>

#include "ifs/codespace.hpp"
#include "ifs/dimension.hpp"
#include "ifs/geometry.hpp"

namespace ifs {

// One inhomogeneous system: IFS + condensation set + code-space subshift,
// with an optional probability vector (p_0, p_1..p_N) for measure sampling.
struct SystemSpec {
  std::vector<Similarity> maps;
  Sft codespace = Sft::full_shift(1);
  CondensationSet condensation = CondensationSet::empty(1);
  AmbientBox ambient{Point{}, Point{}};
  std::optional<std::vector<double>> probabilities;
  bool osc_asserted = false;

  int dim() const { return ambient.dim(); }
  int map_count() const { return static_cast<int>(maps.size()); }
  RatioVector ratio_vector() const;
  void validate() const;
};

// Cap on cloud sizes; construction switches to per-cell thinning when a build
// would exceed it and fails if even the thinned cloud does.
inline constexpr size_t kPointCap = 10'000'000;

// Attractor of the plain IFS (full shift regardless of spec.codespace).
PointCloud attractor_cloud(const SystemSpec& spec, double resolution);

// Image of the subshift under the address map.
PointCloud subshift_cloud(const SystemSpec& spec, double resolution);

// Orbit of the condensation set under all admissible finite compositions,
// together with the condensation set itself.
PointCloud orbit_cloud(const SystemSpec& spec, double resolution);

// Subshift image united with the condensation orbit.
PointCloud inhomogeneous_cloud(const SystemSpec& spec, double resolution);

struct VerificationReport {
  bool passed = false;
  double worst_gap = 0.0;
  double tolerance = 0.0;
};

// Checks F subset of union of map images of F and the condensation set, at
// cloud level: max over F of the distance to the union, against tol.
VerificationReport verify_inclusion(const PointCloud& f,
                                    const SystemSpec& spec, double tol);

// Checks every point of E lies within tol of O (the nontrivial direction of
// the closure identity for the condensation orbit).
bool verify_closure(const PointCloud& e, const PointCloud& o, double tol);

// Points of E farther than tol from every map image of E: the minimal
// condensation set turning E into an inhomogeneous sub-self-similar set.
PointCloud minimal_condensation(const PointCloud& e,
                                const std::vector<Similarity>& maps,
                                double tol);

// Combined system on the concatenated map list with the union condensation.
SystemSpec union_systems(const SystemSpec& a, const SystemSpec& b);

// System whose alphabet is the level-k words: maps are the compositions,
// transitions require the last/first symbol pair to be admissible.
SystemSpec power_system(const SystemSpec& spec, int k);
inline constexpr int kPowerMapCap = 4096;

struct ContinuityRow {
  int k = 0;
  double s_k = 0.0;
  double dim_f_k = 0.0;  // max(s_k, hausdorff dim of condensation)
};
struct ContinuityReport {
  std::vector<ContinuityRow> rows;
  double limit_s = 0.0;
  double limit_dim = 0.0;
};
ContinuityReport continuity_report(const SystemSpec& spec, int k_max);

}  // namespace ifs

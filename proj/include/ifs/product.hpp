#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ifs/construct.hpp"

namespace ifs {

// Product of two inhomogeneous systems: maps act factor-wise, the
// condensation set is the Cartesian product, and the probability weights
// follow the product decomposition (pair weights p_i*q_j plus one lumped
// condensation weight p_0 + q_0 - p_0*q_0).
struct ProductSpec {
  SystemSpec left;
  SystemSpec right;
  SystemSpec combined;
  double condensation_weight = 0.0;
};

ProductSpec product_system(const SystemSpec& a, const SystemSpec& b);

// Cartesian product of condensation primitives, exact for point lists,
// axis-aligned segments and boxes (and unions thereof).
CondensationSet condensation_product(const CondensationSet& a,
                                     const CondensationSet& b);

// Strong separation: map images of the inhomogeneous attractor pairwise
// disjoint and disjoint from the condensation set, at cloud level.
struct SeparationReport {
  bool images_disjoint = false;
  bool images_avoid_condensation = false;
  bool passed = false;
  double min_image_gap = 0.0;
  double min_condensation_gap = 0.0;
};
SeparationReport check_issc(const SystemSpec& spec, double resolution,
                            double margin);

// Open-set condition on a candidate open box U.  The `AsStated` variant
// requires U inside the closure of the condensation set; `Conventional`
// requires the condensation set inside the closure of U.
enum class OscVariant { AsStated, Conventional };
struct OpenSetReport {
  bool invariance = false;
  bool images_disjoint = false;
  bool condensation_clause = false;
  bool passed = false;
  double margin = 0.0;  // smallest gap between image boxes (0 = touching)
};
OpenSetReport check_iosc(const SystemSpec& spec, const AmbientBox& u,
                         OscVariant variant);

// Random-iteration sample of the inhomogeneous invariant measure: apply map
// i with probability p_i, restart from the condensation measure with
// probability p_0.
struct MeasureSample {
  std::vector<Point> points;
  uint64_t seed = 0;
  int burn_in = 0;
  int n = 0;
};
MeasureSample chaos_game(const SystemSpec& spec, int n, int burn,
                         uint64_t seed);

// Compares the independent pair of factor chaos games against the combined
// sampler that uses the product decomposition (pair weights + the mixture
// condensation measure), moment by moment.
struct MomentRow {
  std::string name;
  double mean_independent = 0.0;
  double mean_decomposed = 0.0;
  double diff = 0.0;
  double stderr_combined = 0.0;
  bool pass = false;
};
struct MeasureComparison {
  std::vector<MomentRow> rows;
  double weight_sum_error = 0.0;  // | sum r_ij + w0 - 1 |
  double condensation_weight = 0.0;
  bool passed = false;
};
MeasureComparison product_measure_check(const ProductSpec& p, int n,
                                        uint64_t seed, int max_order);

}  // namespace ifs

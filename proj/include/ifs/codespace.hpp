#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ifs/geometry.hpp"

namespace ifs {

// Admissible finite word over a subshift alphabet, symbols 1..N.
struct Word {
  std::vector<int> symbols;

  int length() const { return static_cast<int>(symbols.size()); }
  bool operator==(const Word& o) const { return symbols == o.symbols; }
  bool operator<(const Word& o) const { return symbols < o.symbols; }
};

// Per-symbol contraction ratios; these double as the metric weights of the
// code-space metric.
struct RatioVector {
  std::vector<double> ratios;
  double rho_min = 0.0;
  double rho_max = 0.0;

  explicit RatioVector(std::vector<double> r);
  int size() const { return static_cast<int>(ratios.size()); }
  double at(int symbol) const {  // 1-based
    return ratios[static_cast<size_t>(symbol - 1)];
  }
};

// Subshift of finite type: transition matrix plus the set of allowed first
// symbols.  Symbols with no infinite continuation are pruned at construction
// so every admissible finite word extends to an infinite sequence.
class Sft {
 public:
  Sft(int alphabet_size, const std::vector<std::vector<int>>& transitions,
      const std::vector<int>& initial);
  static Sft full_shift(int alphabet_size);

  int alphabet_size() const { return n_; }
  bool allows(int i, int j) const;   // 1-based, false through pruned symbols
  bool is_initial(int i) const;      // 1-based, false for pruned symbols
  bool is_alive(int i) const;
  bool is_full_shift() const;
  bool empty_language() const;

  // raw data as given (pre-pruning), for serialization
  bool raw_transition(int i, int j) const;
  const std::vector<int>& raw_initial() const { return raw_initial_; }

 private:
  int n_;
  std::vector<uint8_t> trans_;
  std::vector<uint8_t> initial_;
  std::vector<uint8_t> alive_;
  std::vector<int> raw_initial_;
};

// ok iff for every initial i, every transition i -> j lands in an initial j.
struct ShiftClosureResult {
  bool ok = true;
  std::vector<std::pair<int, int>> violations;
};
ShiftClosureResult validate_shift_closed(const Sft& s);

// All admissible words of length k, lexicographic.
std::vector<Word> level_words(const Sft& s, int k);

double word_ratio(const RatioVector& r, const Word& w);

// S(delta): words whose ratio product first drops below delta, with the
// empty-prefix ratio taken as 1.
std::vector<Word> stopping_set(const Sft& s, const RatioVector& r,
                               double delta);

// { w in S* : ratio(w) >= delta }, lexicographic (prefix before extension).
std::vector<Word> words_with_ratio_at_least(const Sft& s,
                                            const RatioVector& r,
                                            double delta);

// Code-space metric restricted to finite words: 1 if the first symbols
// differ, 0 if equal, else the weight product over the common prefix.
double code_metric(const RatioVector& r, const Word& w, const Word& t);

// Finite-word address map: f_w applied to x0, plus the containment radius
// ratio(w) * ambient_diameter around the returned point.
struct ThetaResult {
  Point point;
  double error_bound;
};
ThetaResult theta(const std::vector<Similarity>& maps, const Word& w,
                  const Point& x0, double ambient_diameter);

// Seed-reproducible admissible words, uniform per step.
std::vector<Word> sample_admissible(const Sft& s, int length, int count,
                                    uint64_t seed);

// Depth-first traversal of the admissible word tree in lexicographic order.
// visit(word, ratio) returns true to descend into the word's extensions.
void walk_words(const Sft& s, const RatioVector& r,
                const std::function<bool(const Word&, double)>& visit);

}  // namespace ifs

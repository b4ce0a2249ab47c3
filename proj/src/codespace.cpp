#include "ifs/codespace.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ifs {

RatioVector::RatioVector(std::vector<double> r) : ratios(std::move(r)) {
  if (ratios.empty()) throw std::invalid_argument("empty ratio vector");
  rho_min = 1.0;
  rho_max = 0.0;
  for (double v : ratios) {
    if (!(v > 0.0) || !(v < 1.0)) {
      throw std::invalid_argument("ratios must lie in (0,1)");
    }
    rho_min = std::min(rho_min, v);
    rho_max = std::max(rho_max, v);
  }
}

// ---------------------------------------------------------------------------
// Sft

Sft::Sft(int alphabet_size, const std::vector<std::vector<int>>& transitions,
         const std::vector<int>& initial)
    : n_(alphabet_size) {
  if (n_ < 1) throw std::invalid_argument("alphabet size must be >= 1");
  if (static_cast<int>(transitions.size()) != n_) {
    throw std::invalid_argument("transition matrix must be N x N");
  }
  trans_.assign(static_cast<size_t>(n_) * n_, 0);
  for (int i = 0; i < n_; ++i) {
    if (static_cast<int>(transitions[static_cast<size_t>(i)].size()) != n_) {
      throw std::invalid_argument("transition matrix must be N x N");
    }
    for (int j = 0; j < n_; ++j) {
      trans_[static_cast<size_t>(i) * n_ + j] =
          transitions[static_cast<size_t>(i)][static_cast<size_t>(j)] ? 1 : 0;
    }
  }
  initial_.assign(static_cast<size_t>(n_), 0);
  for (int s : initial) {
    if (s < 1 || s > n_) throw std::invalid_argument("initial symbol out of range");
    initial_[static_cast<size_t>(s - 1)] = 1;
  }
  raw_initial_ = initial;
  std::sort(raw_initial_.begin(), raw_initial_.end());
  raw_initial_.erase(std::unique(raw_initial_.begin(), raw_initial_.end()),
                     raw_initial_.end());

  // prune symbols with no infinite continuation
  alive_.assign(static_cast<size_t>(n_), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n_; ++i) {
      if (!alive_[static_cast<size_t>(i)]) continue;
      bool has_successor = false;
      for (int j = 0; j < n_; ++j) {
        if (trans_[static_cast<size_t>(i) * n_ + j] &&
            alive_[static_cast<size_t>(j)]) {
          has_successor = true;
          break;
        }
      }
      if (!has_successor) {
        alive_[static_cast<size_t>(i)] = 0;
        changed = true;
      }
    }
  }
}

Sft Sft::full_shift(int alphabet_size) {
  std::vector<std::vector<int>> t(
      static_cast<size_t>(alphabet_size),
      std::vector<int>(static_cast<size_t>(alphabet_size), 1));
  std::vector<int> init(static_cast<size_t>(alphabet_size));
  for (int i = 0; i < alphabet_size; ++i) init[static_cast<size_t>(i)] = i + 1;
  return Sft(alphabet_size, t, init);
}

bool Sft::allows(int i, int j) const {
  return trans_[static_cast<size_t>(i - 1) * n_ + (j - 1)] &&
         alive_[static_cast<size_t>(i - 1)] && alive_[static_cast<size_t>(j - 1)];
}

bool Sft::is_initial(int i) const {
  return initial_[static_cast<size_t>(i - 1)] && alive_[static_cast<size_t>(i - 1)];
}

bool Sft::is_alive(int i) const { return alive_[static_cast<size_t>(i - 1)]; }

bool Sft::is_full_shift() const {
  for (int i = 1; i <= n_; ++i) {
    if (!is_initial(i)) return false;
    for (int j = 1; j <= n_; ++j) {
      if (!allows(i, j)) return false;
    }
  }
  return true;
}

bool Sft::empty_language() const {
  for (int i = 1; i <= n_; ++i) {
    if (is_initial(i)) return false;
  }
  return true;
}

bool Sft::raw_transition(int i, int j) const {
  return trans_[static_cast<size_t>(i - 1) * n_ + (j - 1)] != 0;
}

ShiftClosureResult validate_shift_closed(const Sft& s) {
  ShiftClosureResult res;
  for (int i = 1; i <= s.alphabet_size(); ++i) {
    if (!s.is_initial(i)) continue;
    for (int j = 1; j <= s.alphabet_size(); ++j) {
      if (s.allows(i, j) && !s.is_initial(j)) {
        res.ok = false;
        res.violations.emplace_back(i, j);
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// word enumeration

void walk_words(const Sft& s, const RatioVector& r,
                const std::function<bool(const Word&, double)>& visit) {
  if (r.size() != s.alphabet_size()) {
    throw std::invalid_argument("ratio vector size mismatch");
  }
  Word w;
  std::vector<double> ratio_stack{1.0};
  // iterative DFS keeps deep stopping sets off the call stack
  std::vector<int> next{1};
  while (!next.empty()) {
    int& sym = next.back();
    const int depth = static_cast<int>(next.size()) - 1;
    bool descended = false;
    while (sym <= s.alphabet_size()) {
      const int cand = sym++;
      const bool admissible = depth == 0
                                  ? s.is_initial(cand)
                                  : s.allows(w.symbols.back(), cand);
      if (!admissible) continue;
      const double rho = ratio_stack.back() * r.at(cand);
      w.symbols.push_back(cand);
      if (visit(w, rho)) {
        ratio_stack.push_back(rho);
        next.push_back(1);
        descended = true;
        break;
      }
      w.symbols.pop_back();
    }
    if (!descended) {
      next.pop_back();
      if (!next.empty()) {
        w.symbols.pop_back();
        ratio_stack.pop_back();
      }
    }
  }
}

std::vector<Word> level_words(const Sft& s, int k) {
  if (k < 1) throw std::invalid_argument("level must be >= 1");
  std::vector<Word> out;
  RatioVector dummy(std::vector<double>(
      static_cast<size_t>(s.alphabet_size()), 0.5));
  walk_words(s, dummy, [&](const Word& w, double) {
    if (w.length() == k) {
      out.push_back(w);
      return false;
    }
    return true;
  });
  return out;
}

double word_ratio(const RatioVector& r, const Word& w) {
  double p = 1.0;
  for (int sym : w.symbols) {
    if (sym < 1 || sym > r.size()) {
      throw std::invalid_argument("symbol out of range");
    }
    p *= r.at(sym);
  }
  return p;
}

std::vector<Word> stopping_set(const Sft& s, const RatioVector& r,
                               double delta) {
  if (!(delta > 0.0) || !(delta <= 1.0)) {
    throw std::invalid_argument("delta must lie in (0,1]");
  }
  std::vector<Word> out;
  walk_words(s, r, [&](const Word& w, double rho) {
    if (rho < delta) {
      out.push_back(w);  // parent ratio was >= delta, first crossing
      return false;
    }
    return true;
  });
  return out;
}

std::vector<Word> words_with_ratio_at_least(const Sft& s, const RatioVector& r,
                                            double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0,1)");
  }
  std::vector<Word> out;
  walk_words(s, r, [&](const Word& w, double rho) {
    if (rho >= delta) {
      out.push_back(w);
      return true;
    }
    return false;
  });
  return out;
}

double code_metric(const RatioVector& r, const Word& w, const Word& t) {
  const int n = std::min(w.length(), t.length());
  int common = 0;
  while (common < n &&
         w.symbols[static_cast<size_t>(common)] ==
             t.symbols[static_cast<size_t>(common)]) {
    ++common;
  }
  if (common == w.length() && common == t.length()) return 0.0;
  if (common == 0) return 1.0;
  double p = 1.0;
  for (int i = 0; i < common; ++i) {
    p *= r.at(w.symbols[static_cast<size_t>(i)]);
  }
  return p;
}

ThetaResult theta(const std::vector<Similarity>& maps, const Word& w,
                  const Point& x0, double ambient_diameter) {
  if (w.length() == 0) throw std::invalid_argument("empty word");
  Point p = x0;
  double rho = 1.0;
  for (auto it = w.symbols.rbegin(); it != w.symbols.rend(); ++it) {
    const int sym = *it;
    if (sym < 1 || sym > static_cast<int>(maps.size())) {
      throw std::invalid_argument("word symbol outside map alphabet");
    }
    const Similarity& f = maps[static_cast<size_t>(sym - 1)];
    p = apply(f, p);
    rho *= f.ratio;
  }
  return ThetaResult{p, rho * ambient_diameter};
}

std::vector<Word> sample_admissible(const Sft& s, int length, int count,
                                    uint64_t seed) {
  if (length < 1 || count < 1) {
    throw std::invalid_argument("length and count must be >= 1");
  }
  if (s.empty_language()) {
    throw std::invalid_argument("subshift has no admissible sequences");
  }
  std::vector<int> initial;
  for (int i = 1; i <= s.alphabet_size(); ++i) {
    if (s.is_initial(i)) initial.push_back(i);
  }
  std::mt19937_64 eng(seed);
  const auto uniform_index = [&eng](size_t n) {
    const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    size_t k = static_cast<size_t>(u * static_cast<double>(n));
    return std::min(k, n - 1);
  };
  std::vector<Word> out;
  out.reserve(static_cast<size_t>(count));
  for (int c = 0; c < count; ++c) {
    Word w;
    w.symbols.reserve(static_cast<size_t>(length));
    w.symbols.push_back(initial[uniform_index(initial.size())]);
    while (w.length() < length) {
      std::vector<int> successors;
      for (int j = 1; j <= s.alphabet_size(); ++j) {
        if (s.allows(w.symbols.back(), j)) successors.push_back(j);
      }
      // pruning guarantees at least one successor
      w.symbols.push_back(successors[uniform_index(successors.size())]);
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace ifs

// Formula corpora: exhaustive enumeration by weight and seeded random
// generation. All draws go through Rng so a seed fixes the whole stream on
// every platform.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dkinterp/sequent.hpp"

namespace dkinterp {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, n); rejection sampling keeps it unbiased and portable.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("empty range");
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }
  // Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct Alphabet {
  std::vector<std::string> vars;
  std::vector<Group> groups;
};

// Every formula over the alphabet with weight ≤ max_weight, grouped by
// weight and in a fixed construction order within each weight.
inline std::vector<Formula> enumerate_formulas(const Alphabet& alpha, std::size_t max_weight) {
  std::vector<std::vector<Formula>> by_weight(max_weight + 1);
  for (std::size_t w = 1; w <= max_weight; ++w) {
    auto& out = by_weight[w];
    if (w == 1) {
      for (const auto& v : alpha.vars) out.push_back(Formula::var(v));
      out.push_back(Formula::bottom());
      continue;
    }
    for (const Formula& f : by_weight[w - 1]) out.push_back(Formula::neg(f));
    for (Group g : alpha.groups) {
      for (const Formula& f : by_weight[w - 1]) out.push_back(Formula::dist(g, f));
    }
    for (auto make : {&Formula::conj, &Formula::disj, &Formula::implies}) {
      for (std::size_t i = 1; i + 1 < w; ++i) {
        for (const Formula& l : by_weight[i]) {
          for (const Formula& r : by_weight[w - 1 - i]) out.push_back(make(l, r));
        }
      }
    }
  }
  std::vector<Formula> all;
  for (const auto& layer : by_weight) all.insert(all.end(), layer.begin(), layer.end());
  return all;
}

// A random formula of exactly the given weight.
inline Formula random_formula(Rng& rng, const Alphabet& alpha, std::size_t weight) {
  if (weight == 0) throw std::invalid_argument("formula weight is at least 1");
  if (weight == 1) {
    if (alpha.vars.empty() || rng.chance(1, 8)) return Formula::bottom();
    return Formula::var(rng.pick(alpha.vars));
  }
  // Unary connectives are the only option at weight 2.
  bool unary = weight == 2 || rng.chance(2, 5);
  if (unary) {
    Formula c = random_formula(rng, alpha, weight - 1);
    if (alpha.groups.empty() || rng.chance(1, 2)) return Formula::neg(c);
    return Formula::dist(rng.pick(alpha.groups), c);
  }
  std::size_t left = rng.between(1, weight - 2);
  Formula l = random_formula(rng, alpha, left);
  Formula r = random_formula(rng, alpha, weight - 1 - left);
  switch (rng.below(3)) {
    case 0: return Formula::conj(l, r);
    case 1: return Formula::disj(l, r);
    default: return Formula::implies(l, r);
  }
}

// 1..max_formulas formulas, distributed over both sides, with total weight
// at most max_weight.
inline Sequent random_sequent(Rng& rng, const Alphabet& alpha, std::size_t max_weight,
                              std::size_t max_formulas = 4) {
  Sequent s;
  std::size_t budget = max_weight;
  std::size_t count = rng.between(1, max_formulas);
  for (std::size_t i = 0; i < count && budget > 0; ++i) {
    std::size_t w = rng.between(1, std::min<std::size_t>(budget, std::max<std::size_t>(1, max_weight / 2 + 1)));
    Formula f = random_formula(rng, alpha, w);
    budget -= w;
    if (rng.chance(1, 2)) {
      s.antecedent.insert(f);
    } else {
      s.succedent.insert(f);
    }
  }
  return s;
}

inline FormulaMultiset random_multiset(Rng& rng, const Alphabet& alpha, std::size_t max_weight,
                                       std::size_t max_formulas) {
  FormulaMultiset m;
  std::size_t budget = max_weight;
  std::size_t count = rng.between(0, max_formulas);
  for (std::size_t i = 0; i < count && budget > 0; ++i) {
    std::size_t w = rng.between(1, budget);
    m.insert(random_formula(rng, alpha, w));
    budget -= w;
  }
  return m;
}

}  // namespace dkinterp

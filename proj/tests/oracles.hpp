// Independent brute-force oracles for the unit and acceptance suites. These
// re-derive every quantity from the defining sums, so they share no code with
// the library paths they check.
#pragma once

#include <cmath>
#include <vector>

#include "shapodd/coalition.hpp"
#include "shapodd/game.hpp"
#include "shapodd/transforms.hpp"

namespace oracles {

using shapodd::Coalition;
using shapodd::GameTable;

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Shapley value from the marginal-contribution definition: for each player,
// sum over coalitions not containing it.
inline std::vector<double> eq1_shapley(const GameTable& table) {
  const int d = table.d;
  const std::uint64_t n = std::uint64_t{1} << d;
  std::vector<double> phi(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t mask = 0; mask < n; ++mask) {
      if (mask & bit) continue;
      const int size = std::popcount(mask);
      const double p = 1.0 / (d * binom(d - 1, size));
      phi[static_cast<std::size_t>(i)] +=
          p * (table.at(mask | bit) - table.at(mask));
    }
  }
  return phi;
}

// Mobius coefficient by inclusion-exclusion over the subsets of T.
inline double mobius_coefficient(const GameTable& table, std::uint64_t t) {
  double acc = 0.0;
  const int t_size = std::popcount(t);
  // Enumerate submasks of t.
  std::uint64_t sub = t;
  while (true) {
    const int sign = ((t_size - std::popcount(sub)) & 1) ? -1 : 1;
    acc += sign * table.at(sub);
    if (sub == 0) break;
    sub = (sub - 1) & t;
  }
  return acc;
}

// Fourier coefficient by direct summation over all coalitions.
inline double fourier_coefficient(const GameTable& table, std::uint64_t t) {
  const std::uint64_t n = std::uint64_t{1} << table.d;
  double acc = 0.0;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    const int sign = (std::popcount(mask & t) & 1) ? -1 : 1;
    acc += sign * table.at(mask);
  }
  return acc / static_cast<double>(n);
}

// Pointwise synthesis of a sparse Fourier map.
inline double eval_fourier(const shapodd::CoefficientMap& beta,
                           const Coalition& s) {
  double acc = 0.0;
  for (const auto& [term, value] : beta.entries)
    acc += (s.intersection_size(term) & 1) ? -value : value;
  return acc;
}

// Pointwise synthesis of a sparse Mobius map.
inline double eval_mobius(const shapodd::CoefficientMap& alpha,
                          const Coalition& s) {
  double acc = 0.0;
  for (const auto& [term, value] : alpha.entries)
    if (term.subset_of(s)) acc += value;
  return acc;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracles

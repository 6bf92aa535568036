#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shapodd/coalition.hpp"
#include "shapodd/game.hpp"

namespace shapodd {

enum class Basis { mobius, fourier };

std::string basis_name(Basis b);
Basis basis_from_name(const std::string& name);

// Entries with |value| below this are dropped after every transform or
// conversion, keeping sparse supports free of float noise.
constexpr double kCoefficientPurgeTolerance = 1e-15;

// Sparse coefficient container for either basis: Mobius alpha_T with
// u_T(S) = 1[T subset S], or Fourier beta_T with chi_T(S) = (-1)^{|S n T|}.
struct CoefficientMap {
  int d = 1;
  Basis basis = Basis::mobius;
  std::unordered_map<Coalition, double> entries;

  CoefficientMap() = default;
  CoefficientMap(int dim, Basis b) : d(dim), basis(b) {}

  double at(const Coalition& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? 0.0 : it->second;
  }
  void set(const Coalition& key, double value);
  void purge(double tolerance = kCoefficientPurgeTolerance);
  std::size_t size() const { return entries.size(); }

  // Entries sorted by (cardinality, mask), for deterministic output.
  std::vector<std::pair<Coalition, double>> sorted_entries() const;

  // Pointwise evaluation of the represented function at S.
  double evaluate(const Coalition& s) const;
};

CoefficientMap load_coefficient_map(const std::string& path);
void save_coefficient_map(const CoefficientMap& map, const std::string& path);

// Shapley result with run diagnostics.
struct Attribution {
  int d = 0;
  std::vector<double> phi;
  std::uint64_t budget_used = 0;
  std::size_t basis_size = 0;
  double wall_time = 0.0;  // seconds

  Attribution() = default;
  explicit Attribution(int dim) : d(dim), phi(static_cast<std::size_t>(dim), 0.0) {}

  double sum() const;
};

// Marginal-contribution weight p_ell = (1/d) * C(d-1, ell)^{-1}, 0 <= ell < d.
double shapley_weight_p(int ell, int d);

// Binomial coefficient in double precision.
double binomial(int n, int k);

// Brute-force Shapley values of a full table, O(d 2^d).
Attribution exact_shapley(const GameTable& table);

// f_odd(S) = (f(S) - f(S^c))/2 and f_even(S) = (f(S) + f(S^c))/2.
std::pair<GameTable, GameTable> odd_even_decompose(const GameTable& table);

// Mobius coefficients of a table: alpha solving f(S) = sum_{T subset S} alpha_T.
CoefficientMap mobius_transform(const GameTable& table);

// Fourier coefficients beta_T = 2^{-d} sum_S f(S) (-1)^{|S n T|}, so that
// f = sum_T beta_T chi_T. Fast Walsh-Hadamard butterfly, O(d 2^d).
CoefficientMap fourier_transform(const GameTable& table);

// Dense synthesis back to a table (d <= 24).
GameTable synthesize_table(const CoefficientMap& map);

// Sparse basis conversions over the closure of the input support:
//   alpha_S = (-2)^{|S|} sum_{T superset S} beta_T
//   beta_T  = (-1)^{|T|} sum_{S superset T} alpha_S / 2^{|S|}
CoefficientMap mobius_to_fourier(const CoefficientMap& alpha);
CoefficientMap fourier_to_mobius(const CoefficientMap& beta);

// phi_i = sum_{T containing i} alpha_T / |T|; the empty-set entry is ignored.
Attribution shapley_from_mobius(const CoefficientMap& alpha);

// phi_i = -2 sum_{T containing i, |T| odd} beta_T / |T|; even entries
// contribute nothing.
Attribution shapley_from_fourier(const CoefficientMap& beta);

}  // namespace shapodd

#include "shapodd/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace shapodd {

std::string basis_name(Basis b) {
  return b == Basis::mobius ? "mobius" : "fourier";
}

Basis basis_from_name(const std::string& name) {
  if (name == "mobius") return Basis::mobius;
  if (name == "fourier") return Basis::fourier;
  throw std::invalid_argument("unknown basis: " + name);
}

void CoefficientMap::set(const Coalition& key, double value) {
  if (key.dimension() != d)
    throw std::invalid_argument("coefficient key has wrong dimension");
  if (std::abs(value) < kCoefficientPurgeTolerance)
    entries.erase(key);
  else
    entries[key] = value;
}

void CoefficientMap::purge(double tolerance) {
  for (auto it = entries.begin(); it != entries.end();) {
    if (std::abs(it->second) < tolerance)
      it = entries.erase(it);
    else
      ++it;
  }
}

std::vector<std::pair<Coalition, double>> CoefficientMap::sorted_entries()
    const {
  std::vector<std::pair<Coalition, double>> out(entries.begin(), entries.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  return out;
}

double CoefficientMap::evaluate(const Coalition& s) const {
  double acc = 0.0;
  if (basis == Basis::fourier) {
    for (const auto& [term, coeff] : entries)
      acc += (s.intersection_size(term) & 1) ? -coeff : coeff;
  } else {
    for (const auto& [term, coeff] : entries)
      if (term.subset_of(s)) acc += coeff;
  }
  return acc;
}

CoefficientMap load_coefficient_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open coefficient file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty coefficient file");

  int d = 0;
  char basis_buf[16] = {0};
  if (std::sscanf(line.c_str(), "d=%d basis=%15s", &d, basis_buf) != 2)
    throw std::runtime_error("expected header 'd=<int> basis=<name>'");
  CoefficientMap map(d, basis_from_name(basis_buf));
  if (d < 1 || d > kMaxPlayers)
    throw std::runtime_error("coefficient dimension out of range");

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string mask_text, value_text;
    if (!(row >> mask_text >> value_text))
      throw std::runtime_error("malformed coefficient row: " + line);
    Coalition key = Coalition::from_hex(d, mask_text);
    double value = std::stod(value_text);
    if (!std::isfinite(value))
      throw std::runtime_error("non-finite coefficient for mask " + mask_text);
    if (map.entries.count(key))
      throw std::runtime_error("duplicate coefficient mask: " + mask_text);
    map.entries.emplace(key, value);
  }
  map.purge();
  return map;
}

void save_coefficient_map(const CoefficientMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write coefficient file: " + path);
  out << "d=" << map.d << " basis=" << basis_name(map.basis) << "\n";
  char buf[80];
  for (const auto& [term, coeff] : map.sorted_entries()) {
    std::snprintf(buf, sizeof(buf), "%s %.17g", term.to_hex().c_str(), coeff);
    out << buf << "\n";
  }
}

double Attribution::sum() const {
  double acc = 0.0;
  for (double v : phi) acc += v;
  return acc;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double shapley_weight_p(int ell, int d) {
  if (d < 1) throw std::invalid_argument("d must be positive");
  if (ell < 0 || ell > d - 1)
    throw std::invalid_argument("shapley weight index out of [0, d-1]");
  return 1.0 / (d * binomial(d - 1, ell));
}

Attribution exact_shapley(const GameTable& table) {
  const int d = table.d;
  // phi_i = sum_S f(S) (1[i in S] p_{|S|-1} - 1[i not in S] p_{|S|})
  std::vector<double> p(static_cast<std::size_t>(d));
  for (int ell = 0; ell < d; ++ell)
    p[static_cast<std::size_t>(ell)] = shapley_weight_p(ell, d);

  Attribution out(d);
  const std::uint64_t n = std::uint64_t{1} << d;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    const double f = table.values[mask];
    const int size = std::popcount(mask);
    const double in_weight = size >= 1 ? p[static_cast<std::size_t>(size - 1)] : 0.0;
    const double out_weight = size <= d - 1 ? p[static_cast<std::size_t>(size)] : 0.0;
    for (int i = 0; i < d; ++i) {
      if ((mask >> i) & 1u)
        out.phi[static_cast<std::size_t>(i)] += f * in_weight;
      else
        out.phi[static_cast<std::size_t>(i)] -= f * out_weight;
    }
  }
  out.budget_used = n;
  out.basis_size = static_cast<std::size_t>(n);
  return out;
}

std::pair<GameTable, GameTable> odd_even_decompose(const GameTable& table) {
  const std::uint64_t n = std::uint64_t{1} << table.d;
  const std::uint64_t full = n - 1;
  std::vector<double> odd(n), even(n);
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    const double f = table.values[mask];
    const double fc = table.values[full ^ mask];
    odd[mask] = (f - fc) / 2.0;
    even[mask] = (f + fc) / 2.0;
  }
  return {GameTable(table.d, std::move(odd)), GameTable(table.d, std::move(even))};
}

CoefficientMap mobius_transform(const GameTable& table) {
  const int d = table.d;
  std::vector<double> a = table.values;
  // Subset Mobius inversion, one bit at a time.
  for (int i = 0; i < d; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t mask = 0; mask < a.size(); ++mask)
      if (mask & bit) a[mask] -= a[mask ^ bit];
  }
  CoefficientMap out(d, Basis::mobius);
  for (std::uint64_t mask = 0; mask < a.size(); ++mask)
    if (std::abs(a[mask]) >= kCoefficientPurgeTolerance)
      out.entries.emplace(Coalition::from_index(d, mask), a[mask]);
  return out;
}

CoefficientMap fourier_transform(const GameTable& table) {
  const int d = table.d;
  std::vector<double> a = table.values;
  // In-place Walsh-Hadamard butterfly; H[S][T] = (-1)^{|S n T|}.
  for (std::uint64_t h = 1; h < a.size(); h <<= 1) {
    for (std::uint64_t i = 0; i < a.size(); i += h << 1) {
      for (std::uint64_t j = i; j < i + h; ++j) {
        const double x = a[j];
        const double y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(a.size());
  CoefficientMap out(d, Basis::fourier);
  for (std::uint64_t mask = 0; mask < a.size(); ++mask) {
    const double beta = a[mask] * scale;
    if (std::abs(beta) >= kCoefficientPurgeTolerance)
      out.entries.emplace(Coalition::from_index(d, mask), beta);
  }
  return out;
}

GameTable synthesize_table(const CoefficientMap& map) {
  if (map.d > kMaxTableDimension)
    throw std::invalid_argument("dense synthesis gated to d <= 24");
  const std::uint64_t n = std::uint64_t{1} << map.d;
  std::vector<double> values(n, 0.0);
  for (std::uint64_t mask = 0; mask < n; ++mask)
    values[mask] = map.evaluate(Coalition::from_index(map.d, mask));
  return GameTable(map.d, std::move(values));
}

namespace {

// All subsets of the union-closure needed by the conversions: every subset of
// every support set, deduplicated. Polynomial in support size for bounded
// cardinalities.
std::vector<Coalition> downward_closure(const CoefficientMap& map) {
  std::unordered_set<Coalition> seen;
  std::vector<Coalition> out;
  for (const auto& [term, value] : map.entries) {
    (void)value;
    std::vector<int> bits = term.members();
    const std::uint64_t subsets = std::uint64_t{1} << bits.size();
    for (std::uint64_t pick = 0; pick < subsets; ++pick) {
      Coalition sub(map.d);
      for (std::size_t b = 0; b < bits.size(); ++b)
        if ((pick >> b) & 1u) sub.add(bits[b]);
      if (seen.insert(sub).second) out.push_back(sub);
    }
  }
  return out;
}

}  // namespace

CoefficientMap mobius_to_fourier(const CoefficientMap& alpha) {
  if (alpha.basis != Basis::mobius)
    throw std::invalid_argument("expected mobius coefficients");
  CoefficientMap beta(alpha.d, Basis::fourier);
  // beta_T = (-1)^{|T|} sum_{S superset T} alpha_S / 2^{|S|}
  for (const Coalition& t : downward_closure(alpha)) {
    double acc = 0.0;
    for (const auto& [s, value] : alpha.entries)
      if (t.subset_of(s)) acc += value * std::ldexp(1.0, -s.size());
    if (t.size() & 1) acc = -acc;
    beta.set(t, acc);
  }
  return beta;
}

CoefficientMap fourier_to_mobius(const CoefficientMap& beta) {
  if (beta.basis != Basis::fourier)
    throw std::invalid_argument("expected fourier coefficients");
  CoefficientMap alpha(beta.d, Basis::mobius);
  // alpha_S = (-2)^{|S|} sum_{T superset S} beta_T
  for (const Coalition& s : downward_closure(beta)) {
    double acc = 0.0;
    for (const auto& [t, value] : beta.entries)
      if (s.subset_of(t)) acc += value;
    double sign = (s.size() & 1) ? -1.0 : 1.0;
    alpha.set(s, sign * std::ldexp(acc, s.size()));
  }
  return alpha;
}

Attribution shapley_from_mobius(const CoefficientMap& alpha) {
  if (alpha.basis != Basis::mobius)
    throw std::invalid_argument("expected mobius coefficients");
  Attribution out(alpha.d);
  for (const auto& [term, value] : alpha.entries) {
    const int card = term.size();
    if (card == 0) continue;
    const double share = value / card;
    for (int i : term.members()) out.phi[static_cast<std::size_t>(i)] += share;
  }
  out.basis_size = alpha.size();
  return out;
}

Attribution shapley_from_fourier(const CoefficientMap& beta) {
  if (beta.basis != Basis::fourier)
    throw std::invalid_argument("expected fourier coefficients");
  Attribution out(beta.d);
  for (const auto& [term, value] : beta.entries) {
    const int card = term.size();
    if ((card & 1) == 0) continue;
    const double share = -2.0 * value / card;
    for (int i : term.members()) out.phi[static_cast<std::size_t>(i)] += share;
  }
  out.basis_size = beta.size();
  return out;
}

}  // namespace shapodd

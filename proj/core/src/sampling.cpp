#include "shapodd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "shapodd/transforms.hpp"

namespace shapodd {

std::uint64_t SplitRng::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_below(0)");
  const std::uint64_t threshold = (0 - n) % n;
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r < threshold);
  return r % n;
}

Coalition SplitRng::next_subset(int d, int size) {
  if (size < 0 || size > d)
    throw std::invalid_argument("subset size out of range");
  // Floyd's algorithm: uniform over size-`size` subsets.
  Coalition s(d);
  for (int j = d - size; j < d; ++j) {
    int t = static_cast<int>(next_below(static_cast<std::uint64_t>(j) + 1));
    if (s.contains(t))
      s.add(j);
    else
      s.add(t);
  }
  return s;
}

double kernel_weight(int ell, int d) {
  if (d < 2) throw std::invalid_argument("kernel weight requires d >= 2");
  if (ell < 1 || ell > d - 1)
    throw std::invalid_argument("kernel weight defined for 1 <= ell <= d-1");
  return 1.0 / (static_cast<double>(ell) * (d - ell) * binomial(d, ell));
}

namespace {

constexpr std::uint64_t kCapacityClamp = std::uint64_t{1} << 62;

std::uint64_t clamped_binomial(int d, int ell) {
  double c = binomial(d, ell);
  if (c >= static_cast<double>(kCapacityClamp)) return kCapacityClamp;
  return static_cast<std::uint64_t>(c);
}

// Gosper's hack: next mask with the same popcount.
std::uint64_t next_same_popcount(std::uint64_t v) {
  std::uint64_t t = v | (v - 1);
  return (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace

SampleSet sample_coalitions(int d, std::uint64_t m, std::uint64_t seed,
                            bool paired) {
  if (d < 1 || d > kMaxPlayers)
    throw std::invalid_argument("player count out of range");
  if (m < 2) throw std::invalid_argument("sample budget must be at least 2");

  std::uint64_t target = m;
  if (d <= 62) target = std::min<std::uint64_t>(m, std::uint64_t{1} << d);

  SampleSet out;
  out.d = d;
  out.paired = paired;
  out.includes_boundary = true;
  out.seed = seed;
  out.coalitions.reserve(static_cast<std::size_t>(target));

  std::unordered_set<Coalition> seen;
  auto insert = [&](const Coalition& s) {
    if (!seen.insert(s).second) return false;
    out.coalitions.push_back(s);
    return true;
  };

  insert(Coalition::empty(d));
  insert(Coalition::full(d));
  if (d == 1 || target == 2) return out;

  std::vector<std::uint64_t> capacity(static_cast<std::size_t>(d));
  std::vector<std::uint64_t> count(static_cast<std::size_t>(d), 0);
  for (int ell = 1; ell <= d - 1; ++ell)
    capacity[static_cast<std::size_t>(ell)] = clamped_binomial(d, ell);

  // Shuffled leftovers per size class, materialized once rejection sampling
  // inside the class would stall (only reachable for d <= 24).
  std::unordered_map<int, std::vector<std::uint64_t>> leftovers;

  SplitRng rng(seed);
  std::vector<int> available;
  available.reserve(static_cast<std::size_t>(d - 1));

  auto draw_fresh = [&](int ell) -> Coalition {
    const std::size_t le = static_cast<std::size_t>(ell);
    if (d <= kMaxTableDimension && 2 * count[le] > capacity[le]) {
      auto it = leftovers.find(ell);
      if (it == leftovers.end()) {
        std::vector<std::uint64_t> rest;
        rest.reserve(static_cast<std::size_t>(capacity[le] - count[le]));
        const std::uint64_t limit = std::uint64_t{1} << d;
        for (std::uint64_t v = (std::uint64_t{1} << ell) - 1; v < limit;
             v = next_same_popcount(v))
          if (!seen.count(Coalition::from_index(d, v))) rest.push_back(v);
        rng.shuffle(rest);
        it = leftovers.emplace(ell, std::move(rest)).first;
      }
      // A pairing insert may have consumed queued masks; skip them.
      while (!it->second.empty()) {
        Coalition s = Coalition::from_index(d, it->second.back());
        it->second.pop_back();
        if (!seen.count(s)) return s;
      }
      throw std::logic_error("size class exhausted despite capacity check");
    }
    while (true) {
      Coalition s = rng.next_subset(d, ell);
      if (!seen.count(s)) return s;
    }
  };

  while (out.coalitions.size() < target) {
    available.clear();
    for (int ell = 1; ell <= d - 1; ++ell)
      if (count[static_cast<std::size_t>(ell)] <
          capacity[static_cast<std::size_t>(ell)])
        available.push_back(ell);
    const int ell = available[static_cast<std::size_t>(
        rng.next_below(available.size()))];

    Coalition s = draw_fresh(ell);
    insert(s);
    ++count[static_cast<std::size_t>(ell)];

    if (paired && out.coalitions.size() < target) {
      Coalition sc = s.complement();
      if (insert(sc)) ++count[static_cast<std::size_t>(d - ell)];
    }
  }
  return out;
}

}  // namespace shapodd

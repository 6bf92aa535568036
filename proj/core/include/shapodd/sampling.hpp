#pragma once

#include <cstdint>
#include <vector>

#include "shapodd/coalition.hpp"

namespace shapodd {

// Counter-based splitmix64 generator. Cheap to seed, cheap to split into
// independent sub-streams: stream(tag) reseeds with the finalizer applied to
// seed XOR tag*golden, so any (seed, tag) pair names the same stream in every
// implementation of this scheme.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n), rejection-free of modulo bias.
  std::uint64_t next_below(std::uint64_t n);

  // Uniform in [-1, 1].
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  // Independent sub-stream labelled by `tag`.
  SplitRng stream(std::uint64_t tag) const {
    std::uint64_t z = state_ ^ (0x9e3779b97f4a7c15ull * (tag + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return SplitRng(z ^ (z >> 31));
  }

  // Uniform random subset of {0,...,d-1} with exactly `size` members.
  Coalition next_subset(int d, int size);

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// Sub-stream tags used by the estimators (one base seed reproduces a run).
namespace rng_stream {
constexpr std::uint64_t sampler = 1;
constexpr std::uint64_t proxy = 2;
constexpr std::uint64_t game = 3;
}  // namespace rng_stream

// Kernel regression weight w_ell = 1 / (ell (d-ell) C(d,ell)) for interior
// sizes 1 <= ell <= d-1. The boundary sizes are excluded: they are handled by
// exact constraints, not weights.
double kernel_weight(int ell, int d);

// Ordered, duplicate-free draw of coalitions. The empty and full coalitions
// are always the first two elements.
struct SampleSet {
  int d = 1;
  std::vector<Coalition> coalitions;
  bool paired = false;
  bool includes_boundary = true;
  std::uint64_t seed = 0;

  std::size_t size() const { return coalitions.size(); }

  // Indices of the interior coalitions (everything after the two boundaries).
  std::size_t interior_begin() const { return 2; }
};

// Draws min(m, 2^d) distinct coalitions: the boundaries first, then interior
// subsets by size-uniform rejection sampling (size uniform on {1,...,d-1},
// subset uniform within the size). When paired, each accepted S is immediately
// followed by S^c; an odd final slot is filled by a single unpaired draw.
// Deterministic given (d, m, seed, paired).
SampleSet sample_coalitions(int d, std::uint64_t m, std::uint64_t seed,
                            bool paired);

}  // namespace shapodd

#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shapodd {

constexpr int kMaxPlayers = 128;

// Subset of the player set {1,...,d}, stored as a 128-bit mask.
// Bit i corresponds to player i+1; bits at positions >= d are always zero.
class Coalition {
 public:
  Coalition() = default;

  explicit Coalition(int d) : d_(d) { check_dimension(d); }

  static Coalition empty(int d) { return Coalition(d); }

  static Coalition full(int d) {
    Coalition s(d);
    s.lo_ = mask_lo(d);
    s.hi_ = mask_hi(d);
    return s;
  }

  static Coalition singleton(int d, int player_bit) {
    Coalition s(d);
    s.add(player_bit);
    return s;
  }

  // Interprets `index` as the little-endian bit pattern (player i+1 <-> bit i).
  static Coalition from_index(int d, std::uint64_t index) {
    if (d > 63) throw std::invalid_argument("from_index requires d <= 63");
    Coalition s(d);
    if (d < 63 && index >> d)
      throw std::invalid_argument("coalition index out of range for d");
    s.lo_ = index;
    return s;
  }

  static Coalition from_bits(int d, std::uint64_t lo, std::uint64_t hi = 0) {
    Coalition s(d);
    if ((lo & ~mask_lo(d)) != 0 || (hi & ~mask_hi(d)) != 0)
      throw std::invalid_argument("coalition mask has bits beyond d");
    s.lo_ = lo;
    s.hi_ = hi;
    return s;
  }

  static Coalition from_players(int d, const std::vector<int>& zero_based) {
    Coalition s(d);
    for (int i : zero_based) s.add(i);
    return s;
  }

  int dimension() const { return d_; }

  bool contains(int bit) const {
    check_bit(bit);
    return bit < 64 ? (lo_ >> bit) & 1u : (hi_ >> (bit - 64)) & 1u;
  }

  void add(int bit) {
    check_bit(bit);
    if (bit < 64)
      lo_ |= std::uint64_t{1} << bit;
    else
      hi_ |= std::uint64_t{1} << (bit - 64);
  }

  void remove(int bit) {
    check_bit(bit);
    if (bit < 64)
      lo_ &= ~(std::uint64_t{1} << bit);
    else
      hi_ &= ~(std::uint64_t{1} << (bit - 64));
  }

  Coalition with(int bit) const {
    Coalition s = *this;
    s.add(bit);
    return s;
  }

  Coalition without(int bit) const {
    Coalition s = *this;
    s.remove(bit);
    return s;
  }

  int size() const { return std::popcount(lo_) + std::popcount(hi_); }

  bool is_empty() const { return lo_ == 0 && hi_ == 0; }
  bool is_full() const { return size() == d_; }

  Coalition complement() const {
    Coalition s(d_);
    s.lo_ = ~lo_ & mask_lo(d_);
    s.hi_ = ~hi_ & mask_hi(d_);
    return s;
  }

  int intersection_size(const Coalition& other) const {
    return std::popcount(lo_ & other.lo_) + std::popcount(hi_ & other.hi_);
  }

  bool subset_of(const Coalition& other) const {
    return (lo_ & ~other.lo_) == 0 && (hi_ & ~other.hi_) == 0;
  }

  Coalition intersect(const Coalition& other) const {
    Coalition s(d_);
    s.lo_ = lo_ & other.lo_;
    s.hi_ = hi_ & other.hi_;
    return s;
  }

  Coalition unite(const Coalition& other) const {
    Coalition s(d_);
    s.lo_ = lo_ | other.lo_;
    s.hi_ = hi_ | other.hi_;
    return s;
  }

  // Little-endian integer index; only defined for d <= 63.
  std::uint64_t index() const {
    if (d_ > 63) throw std::logic_error("index() requires d <= 63");
    return lo_;
  }

  std::uint64_t low_bits() const { return lo_; }
  std::uint64_t high_bits() const { return hi_; }

  // Zero-based bit positions of the members, ascending.
  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    std::uint64_t w = lo_;
    while (w) {
      out.push_back(std::countr_zero(w));
      w &= w - 1;
    }
    w = hi_;
    while (w) {
      out.push_back(64 + std::countr_zero(w));
      w &= w - 1;
    }
    return out;
  }

  // Lowercase hex of the mask, no 0x prefix (the on-disk format).
  std::string to_hex() const;
  static Coalition from_hex(int d, const std::string& hex);

  // Display form {1,3,4} with 1-based players.
  std::string to_string() const;

  friend bool operator==(const Coalition& a, const Coalition& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.d_ == b.d_;
  }
  friend bool operator!=(const Coalition& a, const Coalition& b) {
    return !(a == b);
  }
  // Lexicographic bit order == numeric order of the mask.
  friend bool operator<(const Coalition& a, const Coalition& b) {
    if (a.hi_ != b.hi_) return a.hi_ < b.hi_;
    return a.lo_ < b.lo_;
  }

 private:
  static void check_dimension(int d) {
    if (d < 1 || d > kMaxPlayers)
      throw std::invalid_argument("player count must be in [1, 128]");
  }
  void check_bit(int bit) const {
    if (bit < 0 || bit >= d_)
      throw std::out_of_range("player bit out of range");
  }
  static std::uint64_t mask_lo(int d) {
    return d >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << d) - 1;
  }
  static std::uint64_t mask_hi(int d) {
    if (d <= 64) return 0;
    return d >= 128 ? ~std::uint64_t{0} : (std::uint64_t{1} << (d - 64)) - 1;
  }

  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  int d_ = 1;
};

}  // namespace shapodd

template <>
struct std::hash<shapodd::Coalition> {
  std::size_t operator()(const shapodd::Coalition& s) const noexcept {
    std::uint64_t h = s.low_bits() * 0x9e3779b97f4a7c15ull;
    h ^= s.high_bits() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

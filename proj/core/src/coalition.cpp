#include "shapodd/coalition.hpp"

#include <cctype>
#include <sstream>

namespace shapodd {

std::string Coalition::to_hex() const {
  std::ostringstream os;
  os << std::hex;
  if (hi_ != 0) {
    os << hi_;
    os.width(16);
    os.fill('0');
  }
  os << lo_;
  return os.str();
}

Coalition Coalition::from_hex(int d, const std::string& hex) {
  if (hex.empty()) throw std::invalid_argument("empty coalition mask");
  for (char c : hex)
    if (!std::isxdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("invalid hex digit in coalition mask");
  if (hex.size() > 32)
    throw std::invalid_argument("coalition mask longer than 128 bits");

  std::uint64_t lo = 0, hi = 0;
  std::size_t n = hex.size();
  std::size_t lo_digits = n > 16 ? 16 : n;
  lo = std::stoull(hex.substr(n - lo_digits), nullptr, 16);
  if (n > 16) hi = std::stoull(hex.substr(0, n - 16), nullptr, 16);
  return from_bits(d, lo, hi);
}

std::string Coalition::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int bit : members()) {
    if (!first) os << ',';
    os << bit + 1;
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace shapodd

#include "trickkit/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace trickkit {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double RngStream::gaussian(double mean, double sd) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + sd * spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return mean + sd * r * std::cos(angle);
}

std::uint32_t RngStream::below(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::below: n must be positive");
  const std::uint64_t span = 0x100000000ULL;
  const std::uint64_t limit = span - span % n;
  for (;;) {
    const std::uint64_t draw = next_u64() >> 32;
    if (draw < limit) return static_cast<std::uint32_t>(draw % n);
  }
}

}  // namespace trickkit

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace trickkit {

/// splitmix64 finalizer. Used to derive substream seeds and per-network
/// training seeds from a master seed.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic random stream.
///
/// Engine: std::mt19937_64, whose output sequence the C++ standard pins
/// bit-exactly. Uniform doubles take the top 53 bits of one engine output,
/// giving values in [0, 1). Gaussian draws use the Box-Muller transform on
/// two uniforms, caching the second value of each pair. kAlgorithmId names
/// the whole scheme and is recorded in dataset manifests.
class RngStream {
 public:
  static constexpr const char* kAlgorithmId = "mt19937_64/top53/box-muller";

  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Substream for (seed, index). Splitting rule:
  /// child(seed, i) == RngStream(mix64(seed + mix64(i + 1))).
  static RngStream child(std::uint64_t seed, std::uint64_t index) {
    return RngStream(mix64(seed + mix64(index + 1)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double gaussian(double mean, double sd);

  /// Uniform integer in [0, n); rejection sampled, n > 0.
  std::uint32_t below(std::uint32_t n);

  /// Fisher-Yates shuffle driven by below().
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(static_cast<std::uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_{0};
  bool has_spare_{false};
};

}  // namespace trickkit

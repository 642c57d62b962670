#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trickkit/rng.hpp"
#include "trickkit/types.hpp"

namespace trickkit {

inline constexpr std::size_t kMinSignalLength = 90;  // a full detection span must fit
inline constexpr std::size_t kDefaultSignalLength = 128;
inline constexpr std::size_t kSmoothingOrder = 2;
inline constexpr double kMinTriangleBase = 2.0;

/// One triangular pulse. Base and height are drawn per generated sample from
/// Gaussians (base first, then height); the drawn base is clamped to
/// kMinTriangleBase so the pulse keeps nonzero width.
struct TrianglePrimitive {
  double center{0};       // samples
  double base_mean{0};    // samples, > 0
  double base_sd{0};
  double height_mean{0};  // mg, signed
  double height_sd{0};
};

/// Generation recipe for one (class, axis) signature.
struct SignatureModel {
  TrickClass cls{TrickClass::Nollie};
  Axis axis{Axis::X};
  std::vector<TrianglePrimitive> triangles;
  double baseline_mg{0};
  double noise_sd_mg{0};
  std::size_t length{kDefaultSignalLength};
};

/// The versioned set of signature models shipped as data. Loading validates
/// that every model is renderable and detectable (one pulse whose typical
/// drawn height clears the interest threshold).
struct SignatureLibrary {
  int schema_version{1};
  std::string name;
  int revision{1};
  double rate_hz{kDefaultRateHz};
  std::vector<SignatureModel> signatures;

  bool contains(TrickClass c, Axis a) const;
  const SignatureModel& at(TrickClass c, Axis a) const;  // throws config_error
};

/// Draws base/height for each triangle and accumulates the linear pulses on
/// the baseline; overlapping pulses sum. Rejects models shorter than
/// kMinSignalLength.
std::vector<double> render_triangles(const SignatureModel& model, RngStream& rng);

/// Causal mean over the trailing (order + 1) points, expanding at the left
/// edge: out[n] = mean(in[max(0, n - order) .. n]). Length preserved.
std::vector<double> moving_average(std::span<const double> signal, std::size_t order);

std::vector<double> add_noise(std::span<const double> signal, double noise_sd_mg,
                              RngStream& rng);

/// Full per-signal pipeline, in fixed order: triangles -> moving average
/// (order kSmoothingOrder) -> Gaussian noise.
std::vector<double> synthesize_signal(const SignatureModel& model, RngStream& rng);

/// One trick: X, Y, Z signals drawn in that order from the given stream;
/// stance assigned by the class-stance rule.
TrickSample generate_sample(const SignatureLibrary& library, TrickClass cls,
                            std::string id, RngStream& rng);

/// Deterministic in seed. Sample i (in canonical class order) draws from the
/// substream RngStream::child(seed, i), so generation order cannot change
/// the result.
Dataset generate_dataset(const SignatureLibrary& library, const ClassCounts& counts,
                         std::uint64_t seed);

/// Default population: 32/42/37/32/38 per class, 181 tricks in total.
ClassCounts default_counts();

/// Library baked into the binary at build time from data/signature_library.json.
const SignatureLibrary& default_signature_library();

namespace detail {
const char* default_library_json();
}

}  // namespace trickkit

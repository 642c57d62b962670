#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trickkit {

inline constexpr std::size_t kNumClasses = 5;
inline constexpr std::size_t kNumAxes = 3;
inline constexpr std::size_t kWindowLen = 82;
inline constexpr double kDefaultRateHz = 52.0;

/// Flat-ground trick classes in canonical reporting order. Printed reports
/// use the matching 1-based indices (1 = NOLLIE ... 5 = OLLIE).
enum class TrickClass : std::uint8_t { Nollie, NShov, Flip, Shov, Ollie };

/// Rider foot positioning. Generation assigns goofy to NSHOV and FLIP and
/// regular to the other classes.
enum class Stance : std::uint8_t { Regular, Goofy };

enum class Axis : std::uint8_t { X, Y, Z };

constexpr std::array<TrickClass, kNumClasses> all_classes() {
  return {TrickClass::Nollie, TrickClass::NShov, TrickClass::Flip,
          TrickClass::Shov, TrickClass::Ollie};
}

constexpr std::array<Axis, kNumAxes> all_axes() {
  return {Axis::X, Axis::Y, Axis::Z};
}

constexpr std::size_t index_of(TrickClass c) { return static_cast<std::size_t>(c); }
constexpr std::size_t index_of(Axis a) { return static_cast<std::size_t>(a); }

/// 1-based class number used in printed confusion matrices.
constexpr int display_number(TrickClass c) { return static_cast<int>(index_of(c)) + 1; }

constexpr Stance stance_for(TrickClass c) {
  return (c == TrickClass::NShov || c == TrickClass::Flip) ? Stance::Goofy
                                                           : Stance::Regular;
}

std::string_view to_string(TrickClass c);
std::string_view to_string(Stance s);
std::string_view to_string(Axis a);

std::optional<TrickClass> trick_class_from(std::string_view name);
std::optional<Stance> stance_from(std::string_view name);
std::optional<Axis> axis_from(std::string_view name);

/// One axis of acceleration in mg (1 mg = g x 10^-3, g = 9.8 m/s^2) at a
/// fixed sample rate.
struct AccelSignal {
  Axis axis{Axis::X};
  double rate_hz{kDefaultRateHz};
  std::vector<double> samples_mg;

  bool operator==(const AccelSignal&) const = default;
};

/// One trick instance: label, stance and exactly one signal per axis.
struct TrickSample {
  std::string id;
  TrickClass label{TrickClass::Nollie};
  Stance stance{Stance::Regular};
  std::array<AccelSignal, kNumAxes> signals{};  // indexed by Axis

  const AccelSignal& signal(Axis a) const { return signals[index_of(a)]; }
  AccelSignal& signal(Axis a) { return signals[index_of(a)]; }

  bool operator==(const TrickSample&) const = default;
};

/// Fixed 82-point classifier input segment.
struct Window {
  Axis axis{Axis::X};
  std::array<double, kWindowLen> values_mg{};

  bool operator==(const Window&) const = default;
};

using ClassCounts = std::map<TrickClass, std::size_t>;

struct Dataset {
  std::uint64_t seed{0};
  double rate_hz{kDefaultRateHz};
  std::string prng;  // generator identifier, recorded in the manifest
  std::vector<TrickSample> samples;
  ClassCounts manifest_counts;

  bool operator==(const Dataset&) const = default;
};

/// Exact per-class sample counts. Permutation-invariant over sample order.
ClassCounts class_counts(const Dataset& ds);

/// A single broken invariant. Violations are data, not errors: validate()
/// reports all of them instead of throwing on the first.
struct Violation {
  std::string sample_id;  // empty for dataset-level rules
  std::string rule;
  std::string detail;
};

/// Empty result iff every structural invariant holds.
std::vector<Violation> validate(const Dataset& ds);

}  // namespace trickkit

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trickkit/segment.hpp"
#include "trickkit/types.hpp"

namespace trickkit {

/// Numeric slack on the |value| <= 1 bound of normalized scores.
inline constexpr double kScoreTolerance = 1e-9;

struct XcorrScore {
  double value{0};  // in [-1 - tol, 1 + tol]
  int lag{0};       // offset of b against a at the peak
};

/// Peak of the energy-normalized cross-correlation
///   max_k sum_n a[n] * b[n + k] / sqrt(sum a^2 * sum b^2)
/// over all integer lags. Ties pick the smallest |lag|. Throws
/// std::invalid_argument when either window has zero energy.
XcorrScore xcorr_peak(const Window& a, const Window& b);

/// The representative window of one (class, axis), chosen by intra-class
/// correlation ranking.
struct TargetTemplate {
  TrickClass cls{TrickClass::Nollie};
  Axis axis{Axis::X};
  Window window{};
  std::string source_sample;        // provenance
  double mean_intraclass_score{0};  // provenance
};

class TargetSet {
 public:
  void set(TargetTemplate t);
  bool contains(TrickClass c, Axis a) const;
  const TargetTemplate& at(TrickClass c, Axis a) const;  // throws std::out_of_range
  /// True when all three axes are present for the class.
  bool complete(TrickClass c) const;
  std::vector<const TargetTemplate*> all() const;

 private:
  std::array<std::optional<TargetTemplate>, kNumClasses * kNumAxes> slots_{};
};

/// For each (class, axis) present in the input, picks the window with the
/// highest mean peak against all other same-class same-axis windows; ties
/// break on the lexicographically lowest sample id. Classes with a single
/// sample are rejected.
TargetSet select_targets(std::span<const WindowedSample> samples);

/// Mean correlation peaks between class Targets (rows) and class sample
/// populations (columns) on one axis. NaN where a class is absent.
struct CorrelationTable {
  Axis axis{Axis::Z};
  std::array<std::array<double, kNumClasses>, kNumClasses> mean_peak{};
};

CorrelationTable correlation_table(std::span<const WindowedSample> samples,
                                   const TargetSet& targets, Axis axis);

struct AxisWeights {
  double x{1.0};
  double y{1.0};
  double z{2.0};  // the most discriminative axis counts double by default

  double of(Axis a) const {
    switch (a) {
      case Axis::X: return x;
      case Axis::Y: return y;
      default: return z;
    }
  }
};

struct XcorrDecision {
  TrickClass predicted{TrickClass::Nollie};
  std::array<double, kNumClasses> total{};                     // NaN for classes without targets
  std::array<std::array<double, kNumAxes>, kNumClasses> by_axis{};
};

/// Scores every class with complete targets as the weighted sum of per-axis
/// correlation peaks and returns the argmax (ties break on class index).
/// sample_windows must contain exactly one window per axis.
XcorrDecision xcorr_classify(std::span<const Window> sample_windows,
                             const TargetSet& targets, const AxisWeights& weights = {});

}  // namespace trickkit

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "trickkit/types.hpp"

namespace trickkit {

/// Two-threshold event detector settings. Deviations are measured against a
/// rolling median baseline. refractory must be >= window_len so the emitted
/// windows never overlap.
struct DetectorConfig {
  double start_threshold_mg{5000.0};
  double interest_threshold_mg{10000.0};
  std::size_t max_event_span{90};  // samples scanned for the interest threshold
  std::size_t window_len{kWindowLen};
  std::size_t refractory{90};   // samples skipped after an event start
  std::size_t baseline_len{26};  // ~0.5 s of history at 52 samples/s
};

/// Throws config_error when thresholds or spans are inconsistent.
void validate(const DetectorConfig& cfg);

struct Event {
  std::size_t start_index{0};
  bool is_interest{false};
  double baseline_mg{0};          // frozen at the start crossing
  std::optional<Window> window;   // present iff is_interest
};

/// Median of the min(baseline_len, upto_index) samples preceding upto_index
/// (even counts average the two middle values). upto_index must be >= 1.
double estimate_baseline(std::span<const double> stream, std::size_t upto_index,
                         std::size_t baseline_len = 26);

/// Scans the stream for start-threshold crossings, classifies each event by
/// the interest threshold within max_event_span of its start, and extracts
/// the 82-point window for interest events. Stream must be longer than
/// baseline_len.
std::vector<Event> detect_events(const AccelSignal& stream, const DetectorConfig& cfg = {});

/// stream[start_index .. start_index+81]; values past the end of the stream
/// are filled with the baseline estimated at start_index (0 when there is no
/// history). Throws std::out_of_range when start_index is not in the stream.
Window extract_window(const AccelSignal& stream, std::size_t start_index,
                      const DetectorConfig& cfg = {});

/// A trick sample reduced to its per-axis classifier windows.
struct WindowedSample {
  std::string id;
  TrickClass label{TrickClass::Nollie};
  std::array<Window, kNumAxes> windows{};  // indexed by Axis
};

/// Segments every axis of every sample, keeping the first interest event per
/// signal. Throws config_error if any signal yields none.
std::vector<WindowedSample> window_dataset(const Dataset& ds, const DetectorConfig& cfg = {});

}  // namespace trickkit

#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "trickkit/mlp.hpp"
#include "trickkit/types.hpp"

namespace trickkit {

/// 5x5 count matrix, rows = true class, columns = predicted class.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  std::size_t total() const;
  std::size_t diagonal() const;
  double accuracy_pct() const;  // 100 * diagonal / total
  double error_pct() const;     // 100 - accuracy

  bool operator==(const ConfusionMatrix&) const = default;
};

/// Tallies (truth, prediction) pairs. Throws std::invalid_argument on empty
/// or mismatched inputs.
ConfusionMatrix confusion(std::span<const TrickClass> truth,
                          std::span<const TrickClass> predicted);

struct BenchmarkReport {
  std::string classifier_id;
  std::size_t signal_count{0};
  std::size_t repetitions{0};
  std::vector<double> rep_seconds;  // warm-up excluded
  double min_seconds{0};
  double max_seconds{0};
  double median_seconds{0};
  std::string clock_note;
};

/// Times `body` repetitions + 1 times on a steady clock, discarding the
/// first run as warm-up. Single-threaded by contract; the timed region must
/// not perform I/O. Requires repetitions >= 5. An exception from `body`
/// aborts the benchmark with diagnostics attached.
BenchmarkReport benchmark(std::string classifier_id, const std::function<void()>& body,
                          std::size_t signal_count, std::size_t repetitions);

/// CSV of (epoch, train_ce, val_ce) rows followed by a best-epoch marker row.
void export_training_curves(const TrainReport& report, std::ostream& out);

/// Inverse of export_training_curves. Throws config_error on malformed input.
TrainReport parse_training_curves(std::istream& in);

}  // namespace trickkit

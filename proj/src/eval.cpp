#include "trickkit/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "trickkit/errors.hpp"

namespace trickkit {

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts)
    for (std::size_t c : row) n += c;
  return n;
}

std::size_t ConfusionMatrix::diagonal() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < kNumClasses; ++i) n += counts[i][i];
  return n;
}

double ConfusionMatrix::accuracy_pct() const {
  const std::size_t n = total();
  if (n == 0) return 0.0;
  return 100.0 * static_cast<double>(diagonal()) / static_cast<double>(n);
}

double ConfusionMatrix::error_pct() const { return 100.0 - accuracy_pct(); }

ConfusionMatrix confusion(std::span<const TrickClass> truth,
                          std::span<const TrickClass> predicted) {
  if (truth.empty()) throw std::invalid_argument("confusion: no samples");
  if (truth.size() != predicted.size())
    throw std::invalid_argument("confusion: truth and prediction lengths differ");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i)
    ++cm.counts[index_of(truth[i])][index_of(predicted[i])];
  return cm;
}

BenchmarkReport benchmark(std::string classifier_id, const std::function<void()>& body,
                          std::size_t signal_count, std::size_t repetitions) {
  if (repetitions < 5)
    throw std::invalid_argument("benchmark: need at least 5 repetitions");

  using clock = std::chrono::steady_clock;
  BenchmarkReport report;
  report.classifier_id = std::move(classifier_id);
  report.signal_count = signal_count;
  report.repetitions = repetitions;
  {
    std::ostringstream note;
    note << "steady_clock, period " << clock::period::num << "/" << clock::period::den
         << " s";
    report.clock_note = note.str();
  }

  try {
    body();  // warm-up, excluded from the statistics
    report.rep_seconds.reserve(repetitions);
    for (std::size_t r = 0; r < repetitions; ++r) {
      const auto t0 = clock::now();
      body();
      const auto t1 = clock::now();
      report.rep_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
  } catch (const std::exception& e) {
    throw numeric_error("benchmark aborted: classifier '" + report.classifier_id +
                        "' failed: " + e.what());
  }

  std::vector<double> sorted = report.rep_seconds;
  std::sort(sorted.begin(), sorted.end());
  report.min_seconds = sorted.front();
  report.max_seconds = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  report.median_seconds =
      sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return report;
}

void export_training_curves(const TrainReport& report, std::ostream& out) {
  if (report.train_ce.empty())
    throw std::invalid_argument("export_training_curves: empty report");
  out << "epoch,train_ce,val_ce\n";
  out.precision(17);
  for (std::size_t i = 0; i < report.train_ce.size(); ++i)
    out << (i + 1) << ',' << report.train_ce[i] << ',' << report.val_ce[i] << '\n';
  out << "best," << report.best_epoch << ',' << report.best_val_ce << '\n';
}

TrainReport parse_training_curves(std::istream& in) {
  TrainReport report;
  std::string line;
  if (!std::getline(in, line) || line != "epoch,train_ce,val_ce")
    throw config_error("training curves: bad header");
  bool saw_marker = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string first, second, third;
    if (!std::getline(row, first, ',') || !std::getline(row, second, ',') ||
        !std::getline(row, third))
      throw config_error("training curves: malformed row '" + line + "'");
    if (first == "best") {
      report.best_epoch = std::stoul(second);
      report.best_val_ce = std::stod(third);
      saw_marker = true;
      continue;
    }
    report.train_ce.push_back(std::stod(second));
    report.val_ce.push_back(std::stod(third));
  }
  if (!saw_marker) throw config_error("training curves: missing best-epoch marker");
  return report;
}

}  // namespace trickkit

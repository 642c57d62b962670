#include "trickkit/xcorr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace trickkit {

XcorrScore xcorr_peak(const Window& a, const Window& b) {
  double energy_a = 0.0, energy_b = 0.0;
  for (std::size_t n = 0; n < kWindowLen; ++n) {
    energy_a += a.values_mg[n] * a.values_mg[n];
    energy_b += b.values_mg[n] * b.values_mg[n];
  }
  if (energy_a == 0.0 || energy_b == 0.0)
    throw std::invalid_argument("xcorr_peak: zero-energy window");
  const double norm = std::sqrt(energy_a * energy_b);

  constexpr int len = static_cast<int>(kWindowLen);
  XcorrScore best{-std::numeric_limits<double>::infinity(), 0};
  for (int lag = -(len - 1); lag < len; ++lag) {
    double sum = 0.0;
    const int lo = std::max(0, -lag);
    const int hi = std::min(len, len - lag);
    for (int n = lo; n < hi; ++n) sum += a.values_mg[n] * b.values_mg[n + lag];
    const double value = sum / norm;
    if (value > best.value ||
        (value == best.value && std::abs(lag) < std::abs(best.lag))) {
      best = {value, lag};
    }
  }
  return best;
}

void TargetSet::set(TargetTemplate t) {
  slots_[index_of(t.cls) * kNumAxes + index_of(t.axis)] = std::move(t);
}

bool TargetSet::contains(TrickClass c, Axis a) const {
  return slots_[index_of(c) * kNumAxes + index_of(a)].has_value();
}

const TargetTemplate& TargetSet::at(TrickClass c, Axis a) const {
  const auto& slot = slots_[index_of(c) * kNumAxes + index_of(a)];
  if (!slot)
    throw std::out_of_range("TargetSet: no target for " + std::string(to_string(c)) +
                            "/" + std::string(to_string(a)));
  return *slot;
}

bool TargetSet::complete(TrickClass c) const {
  for (Axis a : all_axes())
    if (!contains(c, a)) return false;
  return true;
}

std::vector<const TargetTemplate*> TargetSet::all() const {
  std::vector<const TargetTemplate*> out;
  for (const auto& slot : slots_)
    if (slot) out.push_back(&*slot);
  return out;
}

TargetSet select_targets(std::span<const WindowedSample> samples) {
  std::map<TrickClass, std::vector<const WindowedSample*>> by_class;
  for (const WindowedSample& s : samples) by_class[s.label].push_back(&s);

  TargetSet targets;
  for (const auto& [cls, members] : by_class) {
    if (members.size() < 2)
      throw std::invalid_argument("select_targets: class " +
                                  std::string(to_string(cls)) +
                                  " needs at least two samples");
    for (Axis axis : all_axes()) {
      const std::size_t ai = index_of(axis);
      const std::size_t n = members.size();
      // Pairwise peaks once; the ranking reuses the symmetric half.
      std::vector<double> mean_score(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double v =
              xcorr_peak(members[i]->windows[ai], members[j]->windows[ai]).value;
          mean_score[i] += v;
          mean_score[j] += v;
        }
      }
      for (double& v : mean_score) v /= static_cast<double>(n - 1);

      std::size_t best = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (mean_score[i] > mean_score[best] ||
            (mean_score[i] == mean_score[best] && members[i]->id < members[best]->id)) {
          best = i;
        }
      }
      targets.set({cls, axis, members[best]->windows[ai], members[best]->id,
                   mean_score[best]});
    }
  }
  return targets;
}

CorrelationTable correlation_table(std::span<const WindowedSample> samples,
                                   const TargetSet& targets, Axis axis) {
  CorrelationTable table;
  table.axis = axis;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto& row : table.mean_peak) row.fill(nan);

  const std::size_t ai = index_of(axis);
  for (TrickClass target_cls : all_classes()) {
    if (!targets.contains(target_cls, axis)) continue;
    const Window& target = targets.at(target_cls, axis).window;
    for (TrickClass sample_cls : all_classes()) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const WindowedSample& s : samples) {
        if (s.label != sample_cls) continue;
        sum += xcorr_peak(target, s.windows[ai]).value;
        ++count;
      }
      if (count > 0)
        table.mean_peak[index_of(target_cls)][index_of(sample_cls)] =
            sum / static_cast<double>(count);
    }
  }
  return table;
}

XcorrDecision xcorr_classify(std::span<const Window> sample_windows,
                             const TargetSet& targets, const AxisWeights& weights) {
  std::array<const Window*, kNumAxes> per_axis{};
  for (const Window& w : sample_windows) {
    if (per_axis[index_of(w.axis)] != nullptr)
      throw std::invalid_argument("xcorr_classify: duplicate axis window");
    per_axis[index_of(w.axis)] = &w;
  }
  for (Axis a : all_axes()) {
    if (per_axis[index_of(a)] == nullptr)
      throw std::invalid_argument("xcorr_classify: missing window for axis " +
                                  std::string(to_string(a)));
  }

  XcorrDecision decision;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  decision.total.fill(nan);
  for (auto& row : decision.by_axis) row.fill(nan);

  bool any = false;
  double best = -std::numeric_limits<double>::infinity();
  for (TrickClass cls : all_classes()) {
    if (!targets.complete(cls)) continue;
    double total = 0.0;
    for (Axis a : all_axes()) {
      const double v =
          xcorr_peak(*per_axis[index_of(a)], targets.at(cls, a).window).value;
      decision.by_axis[index_of(cls)][index_of(a)] = v;
      total += weights.of(a) * v;
    }
    decision.total[index_of(cls)] = total;
    if (!any || total > best) {  // ties keep the lowest class index
      any = true;
      best = total;
      decision.predicted = cls;
    }
  }
  if (!any)
    throw std::invalid_argument("xcorr_classify: no class has a complete target set");
  return decision;
}

}  // namespace trickkit

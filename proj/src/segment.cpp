#include "trickkit/segment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trickkit/errors.hpp"

namespace trickkit {

void validate(const DetectorConfig& cfg) {
  if (cfg.start_threshold_mg <= 0 || cfg.start_threshold_mg >= cfg.interest_threshold_mg)
    throw config_error("detector: need 0 < start threshold < interest threshold");
  if (cfg.window_len > cfg.max_event_span)
    throw config_error("detector: window length exceeds the event span");
  if (cfg.window_len != kWindowLen)
    throw config_error("detector: classifier windows are fixed at 82 points");
  if (cfg.refractory < cfg.window_len)
    throw config_error("detector: refractory below window length would overlap windows");
  if (cfg.baseline_len == 0) throw config_error("detector: baseline length must be positive");
}

double estimate_baseline(std::span<const double> stream, std::size_t upto_index,
                         std::size_t baseline_len) {
  if (upto_index == 0)
    throw std::invalid_argument("estimate_baseline: no history before index 0");
  if (upto_index > stream.size())
    throw std::out_of_range("estimate_baseline: index past the stream");

  const std::size_t n = std::min(baseline_len, upto_index);
  std::vector<double> history(stream.begin() + static_cast<long>(upto_index - n),
                              stream.begin() + static_cast<long>(upto_index));
  std::sort(history.begin(), history.end());
  const std::size_t mid = n / 2;
  return n % 2 == 1 ? history[mid] : 0.5 * (history[mid - 1] + history[mid]);
}

namespace {

Window window_from(const std::vector<double>& stream, std::size_t start, Axis axis,
                   double pad_value) {
  Window w;
  w.axis = axis;
  for (std::size_t i = 0; i < kWindowLen; ++i) {
    const std::size_t n = start + i;
    w.values_mg[i] = n < stream.size() ? stream[n] : pad_value;
  }
  return w;
}

}  // namespace

std::vector<Event> detect_events(const AccelSignal& stream, const DetectorConfig& cfg) {
  validate(cfg);
  const std::vector<double>& x = stream.samples_mg;
  if (x.size() < cfg.baseline_len + 1)
    throw std::invalid_argument("detect_events: stream shorter than the baseline span");

  std::vector<Event> events;
  std::size_t n = 1;  // first index with history behind it
  while (n < x.size()) {
    const double baseline = estimate_baseline(x, n, cfg.baseline_len);
    if (std::abs(x[n] - baseline) <= cfg.start_threshold_mg) {
      ++n;
      continue;
    }
    Event ev;
    ev.start_index = n;
    ev.baseline_mg = baseline;
    const std::size_t scan_end = std::min(x.size(), n + cfg.max_event_span);
    for (std::size_t m = n; m < scan_end; ++m) {
      if (std::abs(x[m] - baseline) > cfg.interest_threshold_mg) {
        ev.is_interest = true;
        break;
      }
    }
    if (ev.is_interest) ev.window = window_from(x, n, stream.axis, baseline);
    events.push_back(std::move(ev));
    n += cfg.refractory;
  }
  return events;
}

Window extract_window(const AccelSignal& stream, std::size_t start_index,
                      const DetectorConfig& cfg) {
  validate(cfg);
  const std::vector<double>& x = stream.samples_mg;
  if (start_index >= x.size())
    throw std::out_of_range("extract_window: start index past the stream");
  const double pad =
      start_index == 0 ? 0.0 : estimate_baseline(x, start_index, cfg.baseline_len);
  return window_from(x, start_index, stream.axis, pad);
}

std::vector<WindowedSample> window_dataset(const Dataset& ds, const DetectorConfig& cfg) {
  std::vector<WindowedSample> out;
  out.reserve(ds.samples.size());
  for (const TrickSample& s : ds.samples) {
    WindowedSample ws;
    ws.id = s.id;
    ws.label = s.label;
    for (Axis a : all_axes()) {
      const std::vector<Event> events = detect_events(s.signal(a), cfg);
      const auto hit = std::find_if(events.begin(), events.end(),
                                    [](const Event& e) { return e.is_interest; });
      if (hit == events.end())
        throw config_error("window_dataset: no interest event in sample " + s.id +
                           " axis " + std::string(to_string(a)));
      ws.windows[index_of(a)] = *hit->window;
    }
    out.push_back(std::move(ws));
  }
  return out;
}

}  // namespace trickkit

#include "trickkit/types.hpp"

#include <cmath>
#include <set>

namespace trickkit {

std::string_view to_string(TrickClass c) {
  switch (c) {
    case TrickClass::Nollie: return "NOLLIE";
    case TrickClass::NShov: return "NSHOV";
    case TrickClass::Flip: return "FLIP";
    case TrickClass::Shov: return "SHOV";
    case TrickClass::Ollie: return "OLLIE";
  }
  return "?";
}

std::string_view to_string(Stance s) {
  return s == Stance::Regular ? "regular" : "goofy";
}

std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    default: return "Z";
  }
}

std::optional<TrickClass> trick_class_from(std::string_view name) {
  for (TrickClass c : all_classes())
    if (name == to_string(c)) return c;
  return std::nullopt;
}

std::optional<Stance> stance_from(std::string_view name) {
  if (name == "regular") return Stance::Regular;
  if (name == "goofy") return Stance::Goofy;
  return std::nullopt;
}

std::optional<Axis> axis_from(std::string_view name) {
  for (Axis a : all_axes())
    if (name == to_string(a)) return a;
  return std::nullopt;
}

ClassCounts class_counts(const Dataset& ds) {
  ClassCounts counts;
  for (TrickClass c : all_classes()) counts[c] = 0;
  for (const TrickSample& s : ds.samples) ++counts[s.label];
  return counts;
}

namespace {

void check_sample(const TrickSample& s, std::vector<Violation>& out) {
  const std::size_t len = s.signals[0].samples_mg.size();
  const double rate = s.signals[0].rate_hz;
  for (Axis a : all_axes()) {
    const AccelSignal& sig = s.signal(a);
    if (sig.axis != a)
      out.push_back({s.id, "axis-order", "signal slot does not match its axis tag"});
    if (sig.samples_mg.empty())
      out.push_back({s.id, "signal-non-empty",
                     std::string(to_string(a)) + " signal has no samples"});
    if (sig.samples_mg.size() != len)
      out.push_back({s.id, "signal-length-equal",
                     std::string(to_string(a)) + " signal length differs from X"});
    if (sig.rate_hz <= 0)
      out.push_back({s.id, "rate-positive",
                     std::string(to_string(a)) + " signal rate is not positive"});
    if (sig.rate_hz != rate)
      out.push_back({s.id, "signal-rate-equal",
                     std::string(to_string(a)) + " signal rate differs from X"});
    for (double v : sig.samples_mg) {
      if (!std::isfinite(v)) {
        out.push_back({s.id, "value-finite",
                       std::string(to_string(a)) + " signal contains a non-finite value"});
        break;
      }
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Dataset& ds) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  for (const TrickSample& s : ds.samples) {
    if (!seen.insert(s.id).second)
      out.push_back({s.id, "id-unique", "duplicate sample id"});
    check_sample(s, out);
    for (Axis a : all_axes()) {
      if (s.signal(a).rate_hz != ds.rate_hz) {
        out.push_back({s.id, "dataset-rate-uniform",
                       "signal rate differs from the dataset rate"});
        break;
      }
    }
  }
  const ClassCounts actual = class_counts(ds);
  for (TrickClass c : all_classes()) {
    const auto it = ds.manifest_counts.find(c);
    const std::size_t declared = it == ds.manifest_counts.end() ? 0 : it->second;
    if (declared != actual.at(c))
      out.push_back({"", "manifest-count",
                     std::string(to_string(c)) + " manifest count does not match"});
  }
  return out;
}

}  // namespace trickkit

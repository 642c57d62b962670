#include "trickkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trickkit/errors.hpp"
#include "trickkit/io.hpp"

namespace trickkit {

bool SignatureLibrary::contains(TrickClass c, Axis a) const {
  for (const SignatureModel& m : signatures)
    if (m.cls == c && m.axis == a) return true;
  return false;
}

const SignatureModel& SignatureLibrary::at(TrickClass c, Axis a) const {
  for (const SignatureModel& m : signatures)
    if (m.cls == c && m.axis == a) return m;
  throw config_error("signature library has no entry for " +
                     std::string(to_string(c)) + "/" + std::string(to_string(a)));
}

std::vector<double> render_triangles(const SignatureModel& model, RngStream& rng) {
  if (model.length < kMinSignalLength)
    throw std::invalid_argument("render_triangles: signal length below " +
                                std::to_string(kMinSignalLength));
  for (const TrianglePrimitive& t : model.triangles) {
    if (t.base_mean <= 0 || t.base_sd < 0 || t.height_sd < 0)
      throw std::invalid_argument("render_triangles: invalid triangle parameters");
  }

  std::vector<double> out(model.length, model.baseline_mg);
  for (const TrianglePrimitive& t : model.triangles) {
    const double base = std::max(kMinTriangleBase, rng.gaussian(t.base_mean, t.base_sd));
    const double height = rng.gaussian(t.height_mean, t.height_sd);
    const double half = base / 2.0;
    const long lo = static_cast<long>(std::ceil(t.center - half));
    const long hi = static_cast<long>(std::floor(t.center + half));
    for (long n = std::max(0L, lo);
         n <= std::min(hi, static_cast<long>(model.length) - 1); ++n) {
      out[static_cast<std::size_t>(n)] +=
          height * (1.0 - 2.0 * std::abs(static_cast<double>(n) - t.center) / base);
    }
  }
  return out;
}

std::vector<double> moving_average(std::span<const double> signal, std::size_t order) {
  if (order < 1) throw std::invalid_argument("moving_average: order must be >= 1");
  if (signal.empty()) throw std::invalid_argument("moving_average: empty signal");

  std::vector<double> out(signal.size());
  double window_sum = 0.0;
  for (std::size_t n = 0; n < signal.size(); ++n) {
    window_sum += signal[n];
    if (n > order) window_sum -= signal[n - order - 1];
    out[n] = window_sum / static_cast<double>(std::min(n, order) + 1);
  }
  return out;
}

std::vector<double> add_noise(std::span<const double> signal, double noise_sd_mg,
                              RngStream& rng) {
  if (noise_sd_mg < 0) throw std::invalid_argument("add_noise: negative noise sd");
  std::vector<double> out(signal.begin(), signal.end());
  for (double& v : out) v += rng.gaussian(0.0, noise_sd_mg);
  return out;
}

std::vector<double> synthesize_signal(const SignatureModel& model, RngStream& rng) {
  const std::vector<double> raw = render_triangles(model, rng);
  const std::vector<double> smooth = moving_average(raw, kSmoothingOrder);
  return add_noise(smooth, model.noise_sd_mg, rng);
}

TrickSample generate_sample(const SignatureLibrary& library, TrickClass cls,
                            std::string id, RngStream& rng) {
  for (Axis a : all_axes()) {
    if (!library.contains(cls, a))
      throw config_error("generate_sample: library is missing " +
                         std::string(to_string(cls)) + "/" + std::string(to_string(a)));
  }
  TrickSample sample;
  sample.id = std::move(id);
  sample.label = cls;
  sample.stance = stance_for(cls);
  for (Axis a : all_axes()) {
    const SignatureModel& model = library.at(cls, a);
    AccelSignal& sig = sample.signal(a);
    sig.axis = a;
    sig.rate_hz = library.rate_hz;
    sig.samples_mg = synthesize_signal(model, rng);
  }
  return sample;
}

Dataset generate_dataset(const SignatureLibrary& library, const ClassCounts& counts,
                         std::uint64_t seed) {
  Dataset ds;
  ds.seed = seed;
  ds.rate_hz = library.rate_hz;
  ds.prng = RngStream::kAlgorithmId;

  std::uint64_t sample_index = 0;
  for (TrickClass c : all_classes()) {
    const auto it = counts.find(c);
    const std::size_t n = it == counts.end() ? 0 : it->second;
    ds.manifest_counts[c] = n;
    for (std::size_t k = 0; k < n; ++k, ++sample_index) {
      char id[32];
      std::snprintf(id, sizeof id, "%s-%03zu", std::string(to_string(c)).c_str(), k);
      RngStream stream = RngStream::child(seed, sample_index);
      ds.samples.push_back(generate_sample(library, c, id, stream));
    }
  }
  return ds;
}

ClassCounts default_counts() {
  return {{TrickClass::Nollie, 32},
          {TrickClass::NShov, 42},
          {TrickClass::Flip, 37},
          {TrickClass::Shov, 32},
          {TrickClass::Ollie, 38}};
}

const SignatureLibrary& default_signature_library() {
  static const SignatureLibrary lib =
      io::library_from_json(nlohmann::json::parse(detail::default_library_json()));
  return lib;
}

}  // namespace trickkit

#include "trickkit/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trickkit/errors.hpp"

namespace trickkit {

std::size_t hidden_layer_bound(std::size_t n_patterns, double train_factor,
                               std::size_t n_in, std::size_t n_out) {
  if (n_in + n_out == 0)
    throw std::invalid_argument("hidden_layer_bound: zero layer widths");
  if (n_patterns == 0 || train_factor <= 0)
    throw std::invalid_argument("hidden_layer_bound: inputs must be positive");
  return static_cast<std::size_t>(
      std::floor(static_cast<double>(n_patterns) * train_factor /
                 static_cast<double>(n_in + n_out)));
}

MlpModel init_model(MlpDims dims, std::uint64_t seed) {
  if (dims.n_in == 0 || dims.n_hidden == 0 || dims.n_out == 0)
    throw std::invalid_argument("init_model: zero layer width");
  MlpModel m;
  m.dims = dims;
  m.seed = seed;
  m.w1.resize(dims.n_hidden * dims.n_in);
  m.b1.assign(dims.n_hidden, 0.0);
  m.w2.resize(dims.n_out * dims.n_hidden);
  m.b2.assign(dims.n_out, 0.0);

  RngStream rng(seed);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(dims.n_in));
  for (double& w : m.w1) w = (2.0 * rng.uniform() - 1.0) * bound1;
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(dims.n_hidden));
  for (double& w : m.w2) w = (2.0 * rng.uniform() - 1.0) * bound2;
  return m;
}

namespace {

void check_input(const MlpModel& m, std::span<const double> input) {
  if (input.size() != m.dims.n_in)
    throw std::invalid_argument("forward: input width does not match the model");
  for (double v : input)
    if (!std::isfinite(v)) throw std::invalid_argument("forward: non-finite input");
}

void hidden_activations(const MlpModel& m, std::span<const double> x,
                        std::vector<double>& a1) {
  const std::size_t h = m.dims.n_hidden, in = m.dims.n_in;
  a1.resize(h);
  for (std::size_t i = 0; i < h; ++i) {
    double z = m.b1[i];
    const double* row = m.w1.data() + i * in;
    for (std::size_t j = 0; j < in; ++j) z += row[j] * x[j];
    a1[i] = std::tanh(z);
  }
}

void output_preactivations(const MlpModel& m, std::span<const double> a1,
                           std::vector<double>& z2) {
  const std::size_t h = m.dims.n_hidden, out = m.dims.n_out;
  z2.resize(out);
  for (std::size_t k = 0; k < out; ++k) {
    double z = m.b2[k];
    const double* row = m.w2.data() + k * h;
    for (std::size_t i = 0; i < h; ++i) z += row[i] * a1[i];
    z2[k] = z;
  }
}

void softmax_inplace(std::vector<double>& z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

/// Stable -log softmax(z)[target], shared by mean_loss and the trainer so
/// gradients and losses agree to machine precision.
double logloss_from_preactivations(const std::vector<double>& z2, std::size_t target) {
  const double zmax = *std::max_element(z2.begin(), z2.end());
  double sum = 0.0;
  for (double v : z2) sum += std::exp(v - zmax);
  return zmax + std::log(sum) - z2[target];
}

}  // namespace

std::vector<double> forward(const MlpModel& m, std::span<const double> input) {
  check_input(m, input);
  std::vector<double> a1, z2;
  hidden_activations(m, input, a1);
  output_preactivations(m, a1, z2);
  softmax_inplace(z2);
  return z2;
}

std::vector<double> forward_window(const MlpModel& m, const Window& w) {
  if (m.dims.n_in != kWindowLen)
    throw std::invalid_argument("forward_window: model does not take 82-point windows");
  std::vector<double> scaled(kWindowLen);
  for (std::size_t i = 0; i < kWindowLen; ++i)
    scaled[i] = w.values_mg[i] / m.input_divisor;
  return forward(m, scaled);
}

double cross_entropy(std::span<const double> probs, std::size_t target) {
  if (target >= probs.size())
    throw std::invalid_argument("cross_entropy: target out of range");
  return -std::log(std::max(probs[target], kProbFloor));
}

Gradient gradient(const MlpModel& m, std::span<const std::vector<double>> inputs,
                  std::span<const std::size_t> targets) {
  if (inputs.empty() || inputs.size() != targets.size())
    throw std::invalid_argument("gradient: empty or mismatched batch");
  const std::size_t h = m.dims.n_hidden, in = m.dims.n_in, out = m.dims.n_out;

  Gradient g;
  g.w1.assign(h * in, 0.0);
  g.b1.assign(h, 0.0);
  g.w2.assign(out * h, 0.0);
  g.b2.assign(out, 0.0);

  const double inv_batch = 1.0 / static_cast<double>(inputs.size());
  std::vector<double> a1, probs, delta1(h);
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    const std::vector<double>& x = inputs[n];
    check_input(m, x);
    if (targets[n] >= out)
      throw std::invalid_argument("gradient: target out of range");
    hidden_activations(m, x, a1);
    output_preactivations(m, a1, probs);
    softmax_inplace(probs);

    // delta2 = (softmax - one-hot) / batch
    for (std::size_t k = 0; k < out; ++k) {
      const double d2 = (probs[k] - (k == targets[n] ? 1.0 : 0.0)) * inv_batch;
      double* row = g.w2.data() + k * h;
      for (std::size_t i = 0; i < h; ++i) row[i] += d2 * a1[i];
      g.b2[k] += d2;
      probs[k] = d2;  // reuse as delta2 below
    }
    for (std::size_t i = 0; i < h; ++i) {
      double back = 0.0;
      for (std::size_t k = 0; k < out; ++k) back += m.w2[k * h + i] * probs[k];
      delta1[i] = back * (1.0 - a1[i] * a1[i]);
    }
    for (std::size_t i = 0; i < h; ++i) {
      double* row = g.w1.data() + i * in;
      const double d1 = delta1[i];
      for (std::size_t j = 0; j < in; ++j) row[j] += d1 * x[j];
      g.b1[i] += d1;
    }
  }
  return g;
}

double mean_loss(const MlpModel& m, std::span<const std::vector<double>> inputs,
                 std::span<const std::size_t> targets) {
  if (inputs.empty() || inputs.size() != targets.size())
    throw std::invalid_argument("mean_loss: empty or mismatched batch");
  std::vector<double> a1, z2;
  double sum = 0.0;
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    check_input(m, inputs[n]);
    hidden_activations(m, inputs[n], a1);
    output_preactivations(m, a1, z2);
    sum += logloss_from_preactivations(z2, targets[n]);
  }
  return sum / static_cast<double>(inputs.size());
}

namespace {

std::vector<double> pack(const MlpModel& m) {
  std::vector<double> w;
  w.reserve(m.dims.weight_count());
  w.insert(w.end(), m.w1.begin(), m.w1.end());
  w.insert(w.end(), m.b1.begin(), m.b1.end());
  w.insert(w.end(), m.w2.begin(), m.w2.end());
  w.insert(w.end(), m.b2.begin(), m.b2.end());
  return w;
}

void unpack(const std::vector<double>& w, MlpModel& m) {
  auto it = w.begin();
  std::copy(it, it + static_cast<long>(m.w1.size()), m.w1.begin());
  it += static_cast<long>(m.w1.size());
  std::copy(it, it + static_cast<long>(m.b1.size()), m.b1.begin());
  it += static_cast<long>(m.b1.size());
  std::copy(it, it + static_cast<long>(m.w2.size()), m.w2.begin());
  it += static_cast<long>(m.w2.size());
  std::copy(it, it + static_cast<long>(m.b2.size()), m.b2.begin());
}

std::vector<double> pack_gradient(const Gradient& g) {
  std::vector<double> out;
  out.reserve(g.w1.size() + g.b1.size() + g.w2.size() + g.b2.size());
  out.insert(out.end(), g.w1.begin(), g.w1.end());
  out.insert(out.end(), g.b1.begin(), g.b1.end());
  out.insert(out.end(), g.w2.begin(), g.w2.end());
  out.insert(out.end(), g.b2.begin(), g.b2.end());
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(std::vector<double>& y, double alpha, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

constexpr double kLambdaCeiling = 1e15;
constexpr double kDirectionFloor = 1e-300;  // |p|^2 below this counts as converged

}  // namespace

std::pair<MlpModel, TrainReport> train_scg(MlpModel model, const TrainData& train,
                                           const TrainData& val, const TrainConfig& cfg) {
  if (train.inputs.empty() || val.inputs.empty())
    throw std::invalid_argument("train_scg: training and validation sets must be non-empty");
  if (train.inputs.size() != train.targets.size() ||
      val.inputs.size() != val.targets.size())
    throw std::invalid_argument("train_scg: inputs and targets differ in length");
  {
    std::vector<bool> seen(model.dims.n_out, false);
    std::size_t distinct = 0;
    for (std::size_t t : train.targets) {
      if (t >= model.dims.n_out)
        throw std::invalid_argument("train_scg: target out of range");
      if (!seen[t]) {
        seen[t] = true;
        ++distinct;
      }
    }
    if (distinct < 2)
      throw std::invalid_argument("train_scg: need at least two classes to train");
  }
  if (cfg.sigma0 <= 0 || cfg.lambda0 < 0)
    throw std::invalid_argument("train_scg: invalid SCG parameters");

  const auto loss_of = [&](const std::vector<double>& w) {
    unpack(w, model);
    return mean_loss(model, train.inputs, train.targets);
  };
  const auto grad_of = [&](const std::vector<double>& w) {
    unpack(w, model);
    return pack_gradient(gradient(model, train.inputs, train.targets));
  };
  const auto val_loss_of = [&](const std::vector<double>& w) {
    unpack(w, model);
    return mean_loss(model, val.inputs, val.targets);
  };

  const std::size_t restart_period = model.dims.weight_count();
  std::vector<double> w = pack(model);

  double loss = loss_of(w);
  if (!std::isfinite(loss)) throw numeric_error("train_scg: initial loss is non-finite");
  std::vector<double> grad = grad_of(w);
  if (!all_finite(grad)) throw numeric_error("train_scg: initial gradient is non-finite");

  std::vector<double> residual = grad;  // r = -gradient
  for (double& v : residual) v = -v;
  std::vector<double> direction = residual;

  double lambda = cfg.lambda0;
  double curvature = 0.0;
  double direction_sq = 0.0;
  bool success = true;
  std::size_t updates = 0;

  TrainReport report;
  report.best_val_ce = std::numeric_limits<double>::infinity();
  std::vector<double> best_w = w;
  std::size_t epochs_since_best = 0;
  std::string stop_reason;

  std::vector<double> trial(w.size()), grad_plus;
  // Curvature of the loss along `direction`, from a finite secant of length
  // sigma0/|p|. False when the direction has collapsed to zero.
  const auto refresh_curvature = [&]() {
    direction_sq = dot(direction, direction);
    if (direction_sq < kDirectionFloor) return false;
    const double sigma = cfg.sigma0 / std::sqrt(direction_sq);
    trial = w;
    axpy(trial, sigma, direction);
    grad_plus = grad_of(trial);
    curvature = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      curvature += direction[i] * (grad_plus[i] - grad[i]) / sigma;
    return true;
  };

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    if (success && !refresh_curvature()) {
      stop_reason = "gradient_converged";
      break;
    }

    double mu = dot(direction, residual);
    if (mu <= 0.0) {  // not a descent direction any more: restart
      direction = residual;
      if (!refresh_curvature()) {
        stop_reason = "gradient_converged";
        break;
      }
      mu = direction_sq;
    }

    double delta = curvature + lambda * direction_sq;
    if (delta <= 0.0) {  // raise the damping until the local model is convex
      lambda = 2.0 * (lambda - delta / direction_sq);
      delta = curvature + lambda * direction_sq;
    }

    const double alpha = mu / delta;
    trial = w;
    axpy(trial, alpha, direction);
    const double trial_loss = loss_of(trial);
    // Overshoots into non-finite loss count as a maximally bad step.
    const double comparison = std::isfinite(trial_loss)
                                  ? 2.0 * delta * (loss - trial_loss) / (mu * mu)
                                  : -1.0;

    if (comparison >= 0.0) {  // the quadratic model held up: accept the step
      w = trial;
      loss = trial_loss;
      grad = grad_of(w);
      if (!all_finite(grad))
        throw numeric_error("train_scg: gradient became non-finite");
      ++updates;
      double new_sq = 0.0, cross = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double r_new = -grad[i];
        new_sq += r_new * r_new;
        cross += r_new * residual[i];
        residual[i] = r_new;
      }
      if (updates % restart_period == 0) {
        direction = residual;
      } else {
        const double beta = (new_sq - cross) / mu;
        for (std::size_t i = 0; i < w.size(); ++i)
          direction[i] = residual[i] + beta * direction[i];
      }
      success = true;
      if (comparison >= 0.75) lambda *= 0.25;
    } else {
      success = false;
    }
    if (comparison < 0.25) lambda += delta * (1.0 - comparison) / direction_sq;

    report.train_ce.push_back(loss);
    report.val_ce.push_back(val_loss_of(w));
    if (report.val_ce.back() < report.best_val_ce) {
      report.best_val_ce = report.val_ce.back();
      report.best_epoch = report.val_ce.size();
      best_w = w;
      epochs_since_best = 0;
    } else if (++epochs_since_best >= cfg.patience) {
      stop_reason = "patience";
      break;
    }
    if (!std::isfinite(lambda) || lambda > kLambdaCeiling) {
      stop_reason = "lambda_overflow";
      break;
    }
  }
  if (stop_reason.empty()) stop_reason = "max_epochs";
  report.stop_reason = stop_reason;

  unpack(best_w, model);
  return {std::move(model), std::move(report)};
}

std::pair<MlpModel, TrainReport> train_scg(MlpModel model, std::span<const Window> windows,
                                           std::span<const TrickClass> labels,
                                           const TrainConfig& cfg) {
  if (windows.size() != labels.size())
    throw std::invalid_argument("train_scg: windows and labels differ in length");
  const auto [train_idx, val_idx] = stratified_split(labels, cfg.val_fraction, cfg.seed);

  const auto fill = [&](const std::vector<std::size_t>& idx, TrainData& data) {
    for (std::size_t i : idx) {
      std::vector<double> x(kWindowLen);
      for (std::size_t j = 0; j < kWindowLen; ++j)
        x[j] = windows[i].values_mg[j] / cfg.input_divisor;
      data.inputs.push_back(std::move(x));
      data.targets.push_back(index_of(labels[i]));
    }
  };
  TrainData train, val;
  fill(train_idx, train);
  fill(val_idx, val);
  model.input_divisor = cfg.input_divisor;
  return train_scg(std::move(model), train, val, cfg);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const TrickClass> labels, double val_fraction, std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0))
    throw std::invalid_argument("stratified_split: val_fraction must be in (0, 1)");
  if (labels.empty()) throw std::invalid_argument("stratified_split: no samples");

  std::array<std::vector<std::size_t>, kNumClasses> per_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    per_class[index_of(labels[i])].push_back(i);

  // Largest-remainder apportionment of round(n * fraction) validation slots.
  const auto total_val = static_cast<std::size_t>(
      std::llround(static_cast<double>(labels.size()) * val_fraction));
  std::array<std::size_t, kNumClasses> quota{};
  std::vector<std::pair<double, std::size_t>> remainders;  // (-remainder, class)
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (per_class[c].empty()) continue;
    const double exact = static_cast<double>(per_class[c].size()) * val_fraction;
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[c];
    remainders.emplace_back(-(exact - std::floor(exact)), c);
  }
  std::stable_sort(remainders.begin(), remainders.end());
  std::size_t leftover = total_val > assigned ? total_val - assigned : 0;
  while (leftover > 0) {
    bool progressed = false;
    for (const auto& [neg_rem, c] : remainders) {
      if (leftover == 0) break;
      if (quota[c] + 1 >= per_class[c].size()) continue;  // keep one training sample
      ++quota[c];
      --leftover;
      progressed = true;
    }
    if (!progressed) break;  // every class capped; validation ends up smaller
  }

  std::vector<std::size_t> train_idx, val_idx;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (per_class[c].empty()) continue;
    std::vector<std::size_t> order = per_class[c];
    RngStream rng = RngStream::child(seed, c);
    rng.shuffle(order);
    for (std::size_t i = 0; i < order.size(); ++i)
      (i < quota[c] ? val_idx : train_idx).push_back(order[i]);
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  return {std::move(train_idx), std::move(val_idx)};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_dataset(
    const Dataset& ds, double val_fraction, std::uint64_t seed) {
  std::vector<TrickClass> labels;
  labels.reserve(ds.samples.size());
  for (const TrickSample& s : ds.samples) labels.push_back(s.label);
  for (TrickClass c : all_classes()) {
    if (std::find(labels.begin(), labels.end(), c) == labels.end())
      throw config_error("split_dataset: class " + std::string(to_string(c)) +
                         " has no samples");
  }
  return stratified_split(labels, val_fraction, seed);
}

std::size_t argmax_index(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax_index: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

TrickClass classify(const MlpModel& m, const Window& w) {
  if (m.dims.n_out != kNumClasses)
    throw std::invalid_argument("classify: model does not output trick classes");
  return static_cast<TrickClass>(argmax_index(forward_window(m, w)));
}

TrickClass fuse_axes(std::span<const double> prob_x, std::span<const double> prob_y,
                     std::span<const double> prob_z) {
  if (prob_x.size() != kNumClasses || prob_y.size() != kNumClasses ||
      prob_z.size() != kNumClasses)
    throw std::invalid_argument("fuse_axes: expected three 5-class probability vectors");

  const std::size_t ix = argmax_index(prob_x);
  const std::size_t iy = argmax_index(prob_y);
  const std::size_t iz = argmax_index(prob_z);
  if (ix == iy || ix == iz) return static_cast<TrickClass>(ix);
  if (iy == iz) return static_cast<TrickClass>(iy);

  // All three disagree: highest single-axis confidence wins, ties on class index.
  std::size_t best = ix;
  double best_p = prob_x[ix];
  if (prob_y[iy] > best_p || (prob_y[iy] == best_p && iy < best)) {
    best = iy;
    best_p = prob_y[iy];
  }
  if (prob_z[iz] > best_p || (prob_z[iz] == best_p && iz < best)) {
    best = iz;
  }
  return static_cast<TrickClass>(best);
}

}  // namespace trickkit

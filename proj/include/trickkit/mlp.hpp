#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trickkit/rng.hpp"
#include "trickkit/types.hpp"

namespace trickkit {

/// Probabilities are floored here before the log in cross_entropy.
inline constexpr double kProbFloor = 1e-12;

/// Windows are divided by this before entering a network; 16000 mg is the
/// +-16 g full scale of the modeled sensor, mapping samples to roughly [-1, 1].
inline constexpr double kDefaultInputDivisor = 16000.0;

struct MlpDims {
  std::size_t n_in{kWindowLen};
  std::size_t n_hidden{28};
  std::size_t n_out{kNumClasses};

  std::size_t weight_count() const {
    return n_hidden * n_in + n_hidden + n_out * n_hidden + n_out;
  }
  bool operator==(const MlpDims&) const = default;
};

/// Three-layer feed-forward classifier: tanh hidden layer, softmax output.
/// Weight matrices are row-major (w1 is n_hidden x n_in, w2 n_out x n_hidden).
struct MlpModel {
  MlpDims dims{};
  std::vector<double> w1, b1, w2, b2;
  double input_divisor{kDefaultInputDivisor};
  std::string trained_axis;  // "X", "Y", "Z", "XYZ" or empty
  std::uint64_t seed{0};

  bool operator==(const MlpModel&) const = default;
};

struct TrainConfig {
  std::uint64_t seed{0};
  std::size_t max_epochs{200};
  double val_fraction{0.20};
  std::size_t patience{6};  // epochs without validation improvement
  double sigma0{5e-5};      // second-order step length
  double lambda0{5e-7};     // initial damping scale
  double input_divisor{kDefaultInputDivisor};
};

struct TrainReport {
  std::vector<double> train_ce;  // one entry per epoch
  std::vector<double> val_ce;
  std::size_t best_epoch{0};  // 1-based, matching the curve export
  double best_val_ce{0};
  std::string stop_reason;

  bool operator==(const TrainReport&) const = default;
};

/// Training examples in network units (inputs already scaled).
struct TrainData {
  std::vector<std::vector<double>> inputs;
  std::vector<std::size_t> targets;  // class indices, 0-based
};

/// The printed sizing heuristic for the hidden layer, evaluated verbatim:
/// floor(n_patterns * train_factor / (n_in + n_out)). Advisory only; the
/// shipped networks fix the hidden width at 28.
std::size_t hidden_layer_bound(std::size_t n_patterns, double train_factor,
                               std::size_t n_in, std::size_t n_out);

/// Weights uniform in +-1/sqrt(fan_in) per layer, biases zero, deterministic
/// in seed.
MlpModel init_model(MlpDims dims, std::uint64_t seed);

/// Softmax probabilities for an input already in network units.
std::vector<double> forward(const MlpModel& m, std::span<const double> input);

/// Applies the stored input scaling, then forward().
std::vector<double> forward_window(const MlpModel& m, const Window& w);

/// -log(max(probs[target], kProbFloor)).
double cross_entropy(std::span<const double> probs, std::size_t target);

struct Gradient {
  std::vector<double> w1, b1, w2, b2;
};

/// Mean cross-entropy gradient over the batch, by backpropagation.
Gradient gradient(const MlpModel& m, std::span<const std::vector<double>> inputs,
                  std::span<const std::size_t> targets);

/// Mean cross-entropy over the batch.
double mean_loss(const MlpModel& m, std::span<const std::vector<double>> inputs,
                 std::span<const std::size_t> targets);

/// Full-batch scaled conjugate gradient with adaptive damping, restarting
/// every weight_count() iterations. Records per-epoch losses, keeps the
/// weights of the epoch with minimum validation cross-entropy, and stops on
/// max_epochs or patience exhaustion. Throws numeric_error on a non-finite
/// loss.
std::pair<MlpModel, TrainReport> train_scg(MlpModel model, const TrainData& train,
                                           const TrainData& val, const TrainConfig& cfg);

/// Windows-level convenience: scales by cfg.input_divisor and splits
/// internally (stratified on labels with cfg.seed / cfg.val_fraction).
std::pair<MlpModel, TrainReport> train_scg(MlpModel model, std::span<const Window> windows,
                                           std::span<const TrickClass> labels,
                                           const TrainConfig& cfg);

/// Stratified index split over whatever classes appear in labels. Validation
/// sizes follow a largest-remainder rule: the total validation count is
/// round(n * val_fraction), each class takes floor(count * val_fraction),
/// and the remainder goes to the largest fractional parts (ties on class
/// index). Every class keeps at least one training sample.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const TrickClass> labels, double val_fraction, std::uint64_t seed);

/// Sample-level split of a dataset; requires all five classes present.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_dataset(
    const Dataset& ds, double val_fraction, std::uint64_t seed);

std::size_t argmax_index(std::span<const double> values);

/// Argmax of forward probabilities; exact ties break on the lowest class index.
TrickClass classify(const MlpModel& m, const Window& w);

/// Majority vote over the three per-axis decisions; when all three disagree,
/// the class with the highest single-axis probability wins (ties on class
/// index).
TrickClass fuse_axes(std::span<const double> prob_x, std::span<const double> prob_y,
                     std::span<const double> prob_z);

}  // namespace trickkit

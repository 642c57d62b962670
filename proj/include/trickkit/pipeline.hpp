#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "trickkit/eval.hpp"
#include "trickkit/mlp.hpp"
#include "trickkit/segment.hpp"
#include "trickkit/synth.hpp"
#include "trickkit/xcorr.hpp"

namespace trickkit {

struct PipelineConfig {
  std::uint64_t seed{42};
  ClassCounts counts;           // empty -> default_counts()
  SignatureLibrary library;     // empty signatures -> default_signature_library()
  DetectorConfig detector{};
  TrainConfig train{};          // per-network seeds are derived from `seed`
  AxisWeights weights{};
};

struct NetworkEval {
  std::string name;  // "ANN X" ... "ANN XYZ"
  MlpModel model;
  TrainReport report;
  ConfusionMatrix cm;  // on held-out windows
  double val_accuracy_pct{0};
  // For the pooled network: accuracy restricted to each axis's windows.
  std::array<double, kNumAxes> per_axis_accuracy_pct{};
  bool has_per_axis{false};
};

/// Everything one seeded end-to-end run produces, before any files are
/// written. The evaluation split is sample-level and shared by every
/// classifier, so the comparisons below are over the same held-out tricks.
struct SeedRunResult {
  std::uint64_t seed{0};
  std::size_t n_train{0};
  std::size_t n_val{0};
  Dataset dataset;
  std::vector<WindowedSample> train_windows;
  std::vector<WindowedSample> val_windows;
  TargetSet targets;
  NetworkEval ann_x, ann_y, ann_z, ann_xyz;
  ConfusionMatrix fusion_cm;
  double fusion_accuracy_pct{0};
  ConfusionMatrix xcorr_cm;
  double xcorr_accuracy_pct{0};
};

SeedRunResult run_seed(const PipelineConfig& cfg);

/// Deterministic consolidated report (no wall-clock content).
nlohmann::json report_to_json(const SeedRunResult& r);

/// Runs the full reproduction and writes dataset, windows, targets, models,
/// curves, confusion matrices, report.json and a run manifest into out_dir.
SeedRunResult run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace trickkit

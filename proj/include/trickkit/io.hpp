#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trickkit/eval.hpp"
#include "trickkit/mlp.hpp"
#include "trickkit/segment.hpp"
#include "trickkit/synth.hpp"
#include "trickkit/types.hpp"
#include "trickkit/xcorr.hpp"

namespace trickkit::io {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);
double parse_double(std::string_view text);  // throws config_error

// ---- dataset CSV + manifest JSON ------------------------------------------

void write_dataset_csv(const Dataset& ds, std::ostream& out);
Dataset read_dataset_csv(std::istream& in);  // manifest fields left default

nlohmann::json manifest_to_json(const Dataset& ds);
void apply_manifest(Dataset& ds, const nlohmann::json& manifest);

/// Writes dataset.csv and manifest.json into dir.
void write_dataset(const Dataset& ds, const std::filesystem::path& dir);

/// Reads a dataset from its CSV; when manifest_path is given (or a
/// manifest.json sits next to the CSV) seed/rate/prng/counts come from it.
Dataset read_dataset(const std::filesystem::path& csv_path,
                     const std::optional<std::filesystem::path>& manifest_path = {});

// ---- signature library -----------------------------------------------------

SignatureLibrary library_from_json(const nlohmann::json& j);
nlohmann::json library_to_json(const SignatureLibrary& lib);
SignatureLibrary load_library(const std::filesystem::path& path);

// ---- targets ----------------------------------------------------------------

nlohmann::json targets_to_json(const TargetSet& targets);
TargetSet targets_from_json(const nlohmann::json& j);
void save_targets(const TargetSet& targets, const std::filesystem::path& path);
TargetSet load_targets(const std::filesystem::path& path);

// ---- models -----------------------------------------------------------------

nlohmann::json model_to_json(const MlpModel& m);
MlpModel model_from_json(const nlohmann::json& j);
void save_model(const MlpModel& m, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

// ---- windows CSV ------------------------------------------------------------

struct WindowRow {
  std::size_t event_index{0};
  std::string sample_id;
  Axis axis{Axis::X};
  std::size_t start_index{0};
  double baseline_mg{0};
  Window window{};
};

void write_windows_csv(std::span<const WindowRow> rows, std::ostream& out);
std::vector<WindowRow> read_windows_csv(std::istream& in);

// ---- predictions + confusion ------------------------------------------------

struct PredictionRow {
  std::string sample_id;
  TrickClass truth{TrickClass::Nollie};
  TrickClass predicted{TrickClass::Nollie};
};

void write_predictions_csv(std::span<const PredictionRow> rows, std::ostream& out);
std::vector<PredictionRow> read_predictions_csv(std::istream& in);

/// Counts plus Figure-5 style row percentages and the accuracy/error summary.
void write_confusion_csv(const ConfusionMatrix& cm, std::ostream& out);
nlohmann::json confusion_to_json(const ConfusionMatrix& cm);

// ---- training curves / benchmark -------------------------------------------

void save_training_curves(const TrainReport& report, const std::filesystem::path& path);
nlohmann::json bench_to_json(const BenchmarkReport& report);

// ---- run manifests ----------------------------------------------------------

struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string timestamp_utc;  // filled by write_run_manifest when empty
};

nlohmann::json run_manifest_to_json(const RunManifest& m);
void write_run_manifest(RunManifest m, const std::filesystem::path& path);

// ---- helpers ----------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path);   // throws io_error
void write_text_file(const std::filesystem::path& path, std::string_view content);
nlohmann::json load_json(const std::filesystem::path& path);
void save_json(const nlohmann::json& j, const std::filesystem::path& path);

/// Throws config_error unless j carries the expected schema_version.
void require_schema(const nlohmann::json& j, std::string_view what);

}  // namespace trickkit::io

#include "trickkit/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "trickkit/errors.hpp"

namespace trickkit::io {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::size_t parse_size(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.begin(), text.end(), value);
  if (ec != std::errc{} || ptr != text.end())
    throw config_error("bad " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

TrickClass parse_class(std::string_view text) {
  const auto c = trick_class_from(text);
  if (!c) throw config_error("unknown trick class '" + std::string(text) + "'");
  return *c;
}

Axis parse_axis(std::string_view text) {
  const auto a = axis_from(text);
  if (!a) throw config_error("unknown axis '" + std::string(text) + "'");
  return *a;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw numeric_error("format_double: value not representable");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.begin(), text.end(), value);
  if (ec != std::errc{} || ptr != text.end())
    throw config_error("bad number: '" + std::string(text) + "'");
  return value;
}

// ---- dataset CSV + manifest JSON -------------------------------------------

void write_dataset_csv(const Dataset& ds, std::ostream& out) {
  out << "sample_id,label,stance,t_index,x_mg,y_mg,z_mg\n";
  for (const TrickSample& s : ds.samples) {
    const std::size_t len = s.signals[0].samples_mg.size();
    for (std::size_t t = 0; t < len; ++t) {
      out << s.id << ',' << to_string(s.label) << ',' << to_string(s.stance) << ',' << t;
      for (Axis a : all_axes()) out << ',' << format_double(s.signal(a).samples_mg[t]);
      out << '\n';
    }
  }
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "sample_id,label,stance,t_index,x_mg,y_mg,z_mg")
    throw config_error("dataset CSV: missing or unexpected header");

  Dataset ds;
  TrickSample* current = nullptr;
  std::size_t expected_t = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line);
    if (cols.size() != 7)
      throw config_error("dataset CSV: expected 7 columns, got " +
                         std::to_string(cols.size()));
    const std::string id(cols[0]);
    if (current == nullptr || current->id != id) {
      TrickSample s;
      s.id = id;
      s.label = parse_class(cols[1]);
      const auto st = stance_from(cols[2]);
      if (!st) throw config_error("dataset CSV: unknown stance '" + std::string(cols[2]) + "'");
      s.stance = *st;
      for (Axis a : all_axes()) s.signal(a).axis = a;
      ds.samples.push_back(std::move(s));
      current = &ds.samples.back();
      expected_t = 0;
    }
    if (parse_size(cols[3], "t_index") != expected_t)
      throw config_error("dataset CSV: non-contiguous t_index in sample " + id);
    ++expected_t;
    current->signal(Axis::X).samples_mg.push_back(parse_double(cols[4]));
    current->signal(Axis::Y).samples_mg.push_back(parse_double(cols[5]));
    current->signal(Axis::Z).samples_mg.push_back(parse_double(cols[6]));
  }
  for (TrickSample& s : ds.samples)
    for (Axis a : all_axes()) s.signal(a).rate_hz = ds.rate_hz;
  ds.manifest_counts = class_counts(ds);
  return ds;
}

nlohmann::json manifest_to_json(const Dataset& ds) {
  nlohmann::json counts;
  for (TrickClass c : all_classes()) {
    const auto it = ds.manifest_counts.find(c);
    counts[std::string(to_string(c))] = it == ds.manifest_counts.end() ? 0 : it->second;
  }
  return {{"schema_version", kSchemaVersion},
          {"seed", ds.seed},
          {"rate_hz", ds.rate_hz},
          {"prng", ds.prng},
          {"counts", counts}};
}

void apply_manifest(Dataset& ds, const nlohmann::json& manifest) {
  require_schema(manifest, "dataset manifest");
  ds.seed = manifest.at("seed").get<std::uint64_t>();
  ds.rate_hz = manifest.at("rate_hz").get<double>();
  ds.prng = manifest.value("prng", "");
  ds.manifest_counts.clear();
  for (TrickClass c : all_classes())
    ds.manifest_counts[c] =
        manifest.at("counts").value(std::string(to_string(c)), std::size_t{0});
  for (TrickSample& s : ds.samples)
    for (Axis a : all_axes()) s.signal(a).rate_hz = ds.rate_hz;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ostringstream csv;
  write_dataset_csv(ds, csv);
  write_text_file(dir / "dataset.csv", csv.str());
  save_json(manifest_to_json(ds), dir / "manifest.json");
}

Dataset read_dataset(const std::filesystem::path& csv_path,
                     const std::optional<std::filesystem::path>& manifest_path) {
  std::istringstream csv(read_text_file(csv_path));
  Dataset ds = read_dataset_csv(csv);
  std::filesystem::path manifest =
      manifest_path.value_or(csv_path.parent_path() / "manifest.json");
  if (std::filesystem::exists(manifest)) apply_manifest(ds, load_json(manifest));
  return ds;
}

// ---- signature library -------------------------------------------------------

SignatureLibrary library_from_json(const nlohmann::json& j) {
  require_schema(j, "signature library");
  SignatureLibrary lib;
  lib.schema_version = j.at("schema_version").get<int>();
  lib.name = j.value("name", "unnamed");
  lib.revision = j.value("revision", 1);
  lib.rate_hz = j.value("rate_hz", kDefaultRateHz);
  const std::size_t length = j.value("length", kDefaultSignalLength);

  for (const nlohmann::json& entry : j.at("signatures")) {
    SignatureModel m;
    m.cls = parse_class(entry.at("class").get<std::string>());
    m.axis = parse_axis(entry.at("axis").get<std::string>());
    m.baseline_mg = entry.value("baseline_mg", 0.0);
    m.noise_sd_mg = entry.at("noise_sd_mg").get<double>();
    m.length = entry.value("length", length);
    if (m.length < kMinSignalLength)
      throw config_error("signature library: length below the detection span");
    if (m.noise_sd_mg < 0)
      throw config_error("signature library: negative noise sd");
    for (const nlohmann::json& t : entry.at("triangles")) {
      TrianglePrimitive tri;
      tri.center = t.at("center").get<double>();
      tri.base_mean = t.at("base_mean").get<double>();
      tri.base_sd = t.at("base_sd").get<double>();
      tri.height_mean = t.at("height_mean").get<double>();
      tri.height_sd = t.at("height_sd").get<double>();
      if (tri.base_mean <= 0 || tri.base_sd < 0 || tri.height_sd < 0)
        throw config_error("signature library: invalid triangle parameters");
      m.triangles.push_back(tri);
    }
    // Detectability: some pulse must clear the interest threshold after
    // smoothing, or generated tricks could never register as events.
    bool detectable = false;
    for (const TrianglePrimitive& t : m.triangles)
      if (std::abs(t.height_mean) + 2.0 * t.height_sd > 10000.0) detectable = true;
    if (!detectable)
      throw config_error("signature library: " + std::string(to_string(m.cls)) + "/" +
                         std::string(to_string(m.axis)) +
                         " has no pulse above the interest threshold");
    lib.signatures.push_back(std::move(m));
  }
  for (TrickClass c : all_classes())
    for (Axis a : all_axes())
      if (!lib.contains(c, a))
        throw config_error("signature library: missing entry for " +
                           std::string(to_string(c)) + "/" + std::string(to_string(a)));
  return lib;
}

nlohmann::json library_to_json(const SignatureLibrary& lib) {
  nlohmann::json signatures = nlohmann::json::array();
  for (const SignatureModel& m : lib.signatures) {
    nlohmann::json triangles = nlohmann::json::array();
    for (const TrianglePrimitive& t : m.triangles)
      triangles.push_back({{"center", t.center},
                           {"base_mean", t.base_mean},
                           {"base_sd", t.base_sd},
                           {"height_mean", t.height_mean},
                           {"height_sd", t.height_sd}});
    signatures.push_back({{"class", std::string(to_string(m.cls))},
                          {"axis", std::string(to_string(m.axis))},
                          {"baseline_mg", m.baseline_mg},
                          {"noise_sd_mg", m.noise_sd_mg},
                          {"length", m.length},
                          {"triangles", triangles}});
  }
  return {{"schema_version", lib.schema_version},
          {"name", lib.name},
          {"revision", lib.revision},
          {"rate_hz", lib.rate_hz},
          {"signatures", signatures}};
}

SignatureLibrary load_library(const std::filesystem::path& path) {
  return library_from_json(load_json(path));
}

// ---- targets -------------------------------------------------------------------

nlohmann::json targets_to_json(const TargetSet& targets) {
  nlohmann::json list = nlohmann::json::array();
  for (const TargetTemplate* t : targets.all()) {
    nlohmann::json values = nlohmann::json::array();
    for (double v : t->window.values_mg) values.push_back(v);
    list.push_back({{"class", std::string(to_string(t->cls))},
                    {"axis", std::string(to_string(t->axis))},
                    {"source_sample", t->source_sample},
                    {"mean_intraclass_score", t->mean_intraclass_score},
                    {"values_mg", values}});
  }
  return {{"schema_version", kSchemaVersion}, {"targets", list}};
}

TargetSet targets_from_json(const nlohmann::json& j) {
  require_schema(j, "targets");
  TargetSet out;
  for (const nlohmann::json& entry : j.at("targets")) {
    TargetTemplate t;
    t.cls = parse_class(entry.at("class").get<std::string>());
    t.axis = parse_axis(entry.at("axis").get<std::string>());
    t.source_sample = entry.value("source_sample", "");
    t.mean_intraclass_score = entry.value("mean_intraclass_score", 0.0);
    const nlohmann::json& values = entry.at("values_mg");
    if (values.size() != kWindowLen)
      throw config_error("targets: expected 82 values per window");
    t.window.axis = t.axis;
    for (std::size_t i = 0; i < kWindowLen; ++i)
      t.window.values_mg[i] = values[i].get<double>();
    out.set(std::move(t));
  }
  return out;
}

void save_targets(const TargetSet& targets, const std::filesystem::path& path) {
  save_json(targets_to_json(targets), path);
}

TargetSet load_targets(const std::filesystem::path& path) {
  return targets_from_json(load_json(path));
}

// ---- models ---------------------------------------------------------------------

nlohmann::json model_to_json(const MlpModel& m) {
  return {{"schema_version", kSchemaVersion},
          {"dims", {{"in", m.dims.n_in}, {"hidden", m.dims.n_hidden}, {"out", m.dims.n_out}}},
          {"hidden_activation", "tansig"},
          {"output_activation", "softmax"},
          {"w1", m.w1},
          {"b1", m.b1},
          {"w2", m.w2},
          {"b2", m.b2},
          {"input_divisor_mg", m.input_divisor},
          {"trained_axis", m.trained_axis},
          {"seed", m.seed}};
}

MlpModel model_from_json(const nlohmann::json& j) {
  require_schema(j, "model");
  if (j.at("hidden_activation") != "tansig" || j.at("output_activation") != "softmax")
    throw config_error("model: unsupported activation tags");
  MlpModel m;
  m.dims.n_in = j.at("dims").at("in").get<std::size_t>();
  m.dims.n_hidden = j.at("dims").at("hidden").get<std::size_t>();
  m.dims.n_out = j.at("dims").at("out").get<std::size_t>();
  m.w1 = j.at("w1").get<std::vector<double>>();
  m.b1 = j.at("b1").get<std::vector<double>>();
  m.w2 = j.at("w2").get<std::vector<double>>();
  m.b2 = j.at("b2").get<std::vector<double>>();
  m.input_divisor = j.at("input_divisor_mg").get<double>();
  m.trained_axis = j.value("trained_axis", "");
  m.seed = j.value("seed", std::uint64_t{0});
  if (m.w1.size() != m.dims.n_hidden * m.dims.n_in || m.b1.size() != m.dims.n_hidden ||
      m.w2.size() != m.dims.n_out * m.dims.n_hidden || m.b2.size() != m.dims.n_out)
    throw config_error("model: weight array sizes do not match dims");
  for (const auto* vec : {&m.w1, &m.b1, &m.w2, &m.b2})
    for (double v : *vec)
      if (!std::isfinite(v)) throw config_error("model: non-finite weight");
  return m;
}

void save_model(const MlpModel& m, const std::filesystem::path& path) {
  save_json(model_to_json(m), path);
}

MlpModel load_model(const std::filesystem::path& path) {
  return model_from_json(load_json(path));
}

// ---- windows CSV -----------------------------------------------------------------

void write_windows_csv(std::span<const WindowRow> rows, std::ostream& out) {
  out << "event_index,sample_id,axis,start_index,baseline_mg";
  for (std::size_t i = 0; i < kWindowLen; ++i) {
    char col[8];
    std::snprintf(col, sizeof col, ",v%02zu", i);
    out << col;
  }
  out << '\n';
  for (const WindowRow& r : rows) {
    out << r.event_index << ',' << r.sample_id << ',' << to_string(r.axis) << ','
        << r.start_index << ',' << format_double(r.baseline_mg);
    for (double v : r.window.values_mg) out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<WindowRow> read_windows_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("event_index,sample_id,axis,start_index,baseline_mg", 0) != 0)
    throw config_error("windows CSV: missing or unexpected header");
  std::vector<WindowRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line);
    if (cols.size() != 5 + kWindowLen)
      throw config_error("windows CSV: wrong column count");
    WindowRow r;
    r.event_index = parse_size(cols[0], "event_index");
    r.sample_id = std::string(cols[1]);
    r.axis = parse_axis(cols[2]);
    r.start_index = parse_size(cols[3], "start_index");
    r.baseline_mg = parse_double(cols[4]);
    r.window.axis = r.axis;
    for (std::size_t i = 0; i < kWindowLen; ++i)
      r.window.values_mg[i] = parse_double(cols[5 + i]);
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---- predictions + confusion -------------------------------------------------------

void write_predictions_csv(std::span<const PredictionRow> rows, std::ostream& out) {
  out << "sample_id,truth,predicted\n";
  for (const PredictionRow& r : rows)
    out << r.sample_id << ',' << to_string(r.truth) << ',' << to_string(r.predicted)
        << '\n';
}

std::vector<PredictionRow> read_predictions_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "sample_id,truth,predicted")
    throw config_error("predictions CSV: missing or unexpected header");
  std::vector<PredictionRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line);
    if (cols.size() != 3) throw config_error("predictions CSV: expected 3 columns");
    rows.push_back({std::string(cols[0]), parse_class(cols[1]), parse_class(cols[2])});
  }
  return rows;
}

void write_confusion_csv(const ConfusionMatrix& cm, std::ostream& out) {
  out << "true_class";
  for (TrickClass c : all_classes()) out << ",pred_" << to_string(c);
  out << '\n';
  for (TrickClass i : all_classes()) {
    out << to_string(i);
    for (TrickClass j : all_classes()) out << ',' << cm.counts[index_of(i)][index_of(j)];
    out << '\n';
  }
  const double total = static_cast<double>(cm.total());
  for (TrickClass i : all_classes()) {
    out << "pct_" << to_string(i);
    for (TrickClass j : all_classes()) {
      const double pct =
          total == 0 ? 0.0
                     : 100.0 * static_cast<double>(cm.counts[index_of(i)][index_of(j)]) / total;
      out << ',' << format_double(pct);
    }
    out << '\n';
  }
  out << "total," << cm.total() << '\n';
  out << "accuracy_pct," << format_double(cm.accuracy_pct()) << '\n';
  out << "error_pct," << format_double(cm.error_pct()) << '\n';
}

nlohmann::json confusion_to_json(const ConfusionMatrix& cm) {
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& row : cm.counts) counts.push_back(row);
  return {{"schema_version", kSchemaVersion},
          {"rows", "true_class"},
          {"columns", "predicted_class"},
          {"class_order", {"NOLLIE", "NSHOV", "FLIP", "SHOV", "OLLIE"}},
          {"counts", counts},
          {"total", cm.total()},
          {"accuracy_pct", cm.accuracy_pct()},
          {"error_pct", cm.error_pct()}};
}

// ---- training curves / benchmark ----------------------------------------------------

void save_training_curves(const TrainReport& report, const std::filesystem::path& path) {
  std::ostringstream out;
  export_training_curves(report, out);
  write_text_file(path, out.str());
}

nlohmann::json bench_to_json(const BenchmarkReport& report) {
  return {{"schema_version", kSchemaVersion},
          {"classifier", report.classifier_id},
          {"signals", report.signal_count},
          {"repetitions", report.repetitions},
          {"warmup_excluded", true},
          {"seconds",
           {{"min", report.min_seconds},
            {"max", report.max_seconds},
            {"median", report.median_seconds}}},
          {"rep_seconds", report.rep_seconds},
          {"clock", report.clock_note}};
}

// ---- run manifests --------------------------------------------------------------------

nlohmann::json run_manifest_to_json(const RunManifest& m) {
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"tool_version", kToolVersion},
                      {"command", m.command},
                      {"args", m.args},
                      {"inputs", m.inputs},
                      {"outputs", m.outputs},
                      {"timestamp_utc", m.timestamp_utc}};
  if (m.seed) j["seed"] = *m.seed;
  return j;
}

void write_run_manifest(RunManifest m, const std::filesystem::path& path) {
  if (m.timestamp_utc.empty()) m.timestamp_utc = utc_now();
  save_json(run_manifest_to_json(m), path);
}

// ---- helpers ----------------------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw io_error("failed reading " + path.string());
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw io_error("failed writing " + path.string());
}

nlohmann::json load_json(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(path.string() + ": " + e.what());
  }
}

void save_json(const nlohmann::json& j, const std::filesystem::path& path) {
  write_text_file(path, j.dump(2) + "\n");
}

void require_schema(const nlohmann::json& j, std::string_view what) {
  if (!j.is_object() || !j.contains("schema_version"))
    throw config_error(std::string(what) + ": missing schema_version");
  if (j.at("schema_version").get<int>() != kSchemaVersion)
    throw config_error(std::string(what) + ": unsupported schema_version");
}

}  // namespace trickkit::io

#include "trickkit/pipeline.hpp"

#include <sstream>

#include "trickkit/errors.hpp"
#include "trickkit/io.hpp"

namespace trickkit {

namespace {

// Reference figures the consolidated report is compared against.
struct ReferenceFigures {
  double ann_x_acc = 94.8;
  double ann_y_acc = 96.7;
  double ann_z_acc = 98.7;
  double ann_xyz_acc = 92.8;
  double ann_z_best_ce = 0.019549;
  double ann_xyz_best_ce = 0.078475;
  double fusion_error = 0.04;
};

std::uint64_t network_seed(std::uint64_t master, std::size_t slot) {
  return mix64(master + mix64(7000 + slot));
}

TrainData to_train_data(std::span<const WindowedSample> samples,
                        std::optional<Axis> axis, double divisor) {
  TrainData data;
  for (const WindowedSample& s : samples) {
    for (Axis a : all_axes()) {
      if (axis && a != *axis) continue;
      std::vector<double> x(kWindowLen);
      for (std::size_t j = 0; j < kWindowLen; ++j)
        x[j] = s.windows[index_of(a)].values_mg[j] / divisor;
      data.inputs.push_back(std::move(x));
      data.targets.push_back(index_of(s.label));
    }
  }
  return data;
}

NetworkEval train_network(const std::string& name, std::optional<Axis> axis,
                          std::span<const WindowedSample> train_ws,
                          std::span<const WindowedSample> val_ws,
                          const TrainConfig& base, std::uint64_t master_seed,
                          std::size_t slot) {
  TrainConfig cfg = base;
  cfg.seed = network_seed(master_seed, slot);

  MlpModel model = init_model({kWindowLen, 28, kNumClasses}, cfg.seed);
  model.input_divisor = cfg.input_divisor;
  model.trained_axis = axis ? std::string(to_string(*axis)) : "XYZ";

  const TrainData train = to_train_data(train_ws, axis, cfg.input_divisor);
  const TrainData val = to_train_data(val_ws, axis, cfg.input_divisor);

  NetworkEval eval;
  eval.name = name;
  std::tie(eval.model, eval.report) = train_scg(std::move(model), train, val, cfg);

  std::vector<TrickClass> truth, pred;
  std::array<std::array<std::size_t, 2>, kNumAxes> per_axis{};  // {correct, total}
  for (const WindowedSample& s : val_ws) {
    for (Axis a : all_axes()) {
      if (axis && a != *axis) continue;
      const TrickClass p = classify(eval.model, s.windows[index_of(a)]);
      truth.push_back(s.label);
      pred.push_back(p);
      ++per_axis[index_of(a)][1];
      if (p == s.label) ++per_axis[index_of(a)][0];
    }
  }
  eval.cm = confusion(truth, pred);
  eval.val_accuracy_pct = eval.cm.accuracy_pct();
  if (!axis) {
    eval.has_per_axis = true;
    for (Axis a : all_axes()) {
      const auto [correct, total] = per_axis[index_of(a)];
      eval.per_axis_accuracy_pct[index_of(a)] =
          total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
    }
  }
  return eval;
}

nlohmann::json network_to_json(const NetworkEval& n) {
  nlohmann::json j = {{"name", n.name},
                      {"val_accuracy_pct", n.val_accuracy_pct},
                      {"val_error_pct", 100.0 - n.val_accuracy_pct},
                      {"best_val_ce", n.report.best_val_ce},
                      {"best_epoch", n.report.best_epoch},
                      {"epochs", n.report.train_ce.size()},
                      {"stop_reason", n.report.stop_reason},
                      {"confusion", io::confusion_to_json(n.cm)}};
  if (n.has_per_axis) {
    j["per_axis_accuracy_pct"] = {{"X", n.per_axis_accuracy_pct[0]},
                                  {"Y", n.per_axis_accuracy_pct[1]},
                                  {"Z", n.per_axis_accuracy_pct[2]}};
  }
  return j;
}

}  // namespace

SeedRunResult run_seed(const PipelineConfig& cfg) {
  const SignatureLibrary& library =
      cfg.library.signatures.empty() ? default_signature_library() : cfg.library;
  const ClassCounts counts = cfg.counts.empty() ? default_counts() : cfg.counts;

  SeedRunResult r;
  r.seed = cfg.seed;
  r.dataset = generate_dataset(library, counts, cfg.seed);

  const std::vector<WindowedSample> windows = window_dataset(r.dataset, cfg.detector);
  const auto [train_idx, val_idx] =
      split_dataset(r.dataset, cfg.train.val_fraction, cfg.seed);
  for (std::size_t i : train_idx) r.train_windows.push_back(windows[i]);
  for (std::size_t i : val_idx) r.val_windows.push_back(windows[i]);
  r.n_train = r.train_windows.size();
  r.n_val = r.val_windows.size();

  r.targets = select_targets(r.train_windows);

  r.ann_x = train_network("ANN X", Axis::X, r.train_windows, r.val_windows, cfg.train,
                          cfg.seed, 0);
  r.ann_y = train_network("ANN Y", Axis::Y, r.train_windows, r.val_windows, cfg.train,
                          cfg.seed, 1);
  r.ann_z = train_network("ANN Z", Axis::Z, r.train_windows, r.val_windows, cfg.train,
                          cfg.seed, 2);
  r.ann_xyz = train_network("ANN XYZ", std::nullopt, r.train_windows, r.val_windows,
                            cfg.train, cfg.seed, 3);

  std::vector<TrickClass> truth, fused, by_xcorr;
  for (const WindowedSample& s : r.val_windows) {
    truth.push_back(s.label);
    const auto px = forward_window(r.ann_x.model, s.windows[index_of(Axis::X)]);
    const auto py = forward_window(r.ann_y.model, s.windows[index_of(Axis::Y)]);
    const auto pz = forward_window(r.ann_z.model, s.windows[index_of(Axis::Z)]);
    fused.push_back(fuse_axes(px, py, pz));
    by_xcorr.push_back(xcorr_classify(s.windows, r.targets, cfg.weights).predicted);
  }
  r.fusion_cm = confusion(truth, fused);
  r.fusion_accuracy_pct = r.fusion_cm.accuracy_pct();
  r.xcorr_cm = confusion(truth, by_xcorr);
  r.xcorr_accuracy_pct = r.xcorr_cm.accuracy_pct();
  return r;
}

nlohmann::json report_to_json(const SeedRunResult& r) {
  const ReferenceFigures ref;
  nlohmann::json counts;
  for (TrickClass c : all_classes())
    counts[std::string(to_string(c))] = r.dataset.manifest_counts.at(c);

  return {{"schema_version", io::kSchemaVersion},
          {"seed", r.seed},
          {"counts", counts},
          {"samples", r.dataset.samples.size()},
          {"signals", r.dataset.samples.size() * kNumAxes},
          {"split", {{"train", r.n_train}, {"val", r.n_val}}},
          {"classifiers",
           {{"ann_x", network_to_json(r.ann_x)},
            {"ann_y", network_to_json(r.ann_y)},
            {"ann_z", network_to_json(r.ann_z)},
            {"ann_xyz", network_to_json(r.ann_xyz)},
            {"fusion",
             {{"val_accuracy_pct", r.fusion_accuracy_pct},
              {"val_error_pct", 100.0 - r.fusion_accuracy_pct},
              {"confusion", io::confusion_to_json(r.fusion_cm)}}},
            {"xcorr",
             {{"val_accuracy_pct", r.xcorr_accuracy_pct},
              {"val_error_pct", 100.0 - r.xcorr_accuracy_pct},
              {"confusion", io::confusion_to_json(r.xcorr_cm)}}}}},
          {"reference",
           {{"ann_x_accuracy_pct", ref.ann_x_acc},
            {"ann_y_accuracy_pct", ref.ann_y_acc},
            {"ann_z_accuracy_pct", ref.ann_z_acc},
            {"ann_xyz_accuracy_pct", ref.ann_xyz_acc},
            {"ann_z_best_ce", ref.ann_z_best_ce},
            {"ann_xyz_best_ce", ref.ann_xyz_best_ce},
            {"fusion_error_pct", ref.fusion_error}}}};
}

SeedRunResult run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  SeedRunResult r = run_seed(cfg);

  io::write_dataset(r.dataset, out_dir);

  {
    std::vector<io::WindowRow> rows;
    std::size_t event_index = 0;
    for (const TrickSample& s : r.dataset.samples) {
      for (Axis a : all_axes()) {
        for (const Event& ev : detect_events(s.signal(a), cfg.detector)) {
          if (!ev.is_interest) continue;
          rows.push_back({event_index++, s.id, a, ev.start_index, ev.baseline_mg,
                          *ev.window});
        }
      }
    }
    std::ostringstream out;
    io::write_windows_csv(rows, out);
    io::write_text_file(out_dir / "windows.csv", out.str());
  }

  io::save_targets(r.targets, out_dir / "targets.json");

  const std::array<const NetworkEval*, 4> nets = {&r.ann_x, &r.ann_y, &r.ann_z,
                                                  &r.ann_xyz};
  const std::array<const char*, 4> tags = {"x", "y", "z", "xyz"};
  for (std::size_t i = 0; i < nets.size(); ++i) {
    io::save_model(nets[i]->model, out_dir / ("model_" + std::string(tags[i]) + ".json"));
    io::save_training_curves(nets[i]->report,
                             out_dir / ("curves_" + std::string(tags[i]) + ".csv"));
    std::ostringstream cm;
    io::write_confusion_csv(nets[i]->cm, cm);
    io::write_text_file(out_dir / ("confusion_ann_" + std::string(tags[i]) + ".csv"),
                        cm.str());
  }
  {
    std::ostringstream cm;
    io::write_confusion_csv(r.fusion_cm, cm);
    io::write_text_file(out_dir / "confusion_fusion.csv", cm.str());
  }
  {
    std::ostringstream cm;
    io::write_confusion_csv(r.xcorr_cm, cm);
    io::write_text_file(out_dir / "confusion_xcorr.csv", cm.str());
  }

  io::save_json(report_to_json(r), out_dir / "report.json");
  return r;
}

}  // namespace trickkit

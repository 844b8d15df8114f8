// cosparse: generate synthetic scenes, learn trimodal analysis operators,
// super-resolve sparse depth with semantic denoising, and score the results.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "cosparse/bench.hpp"
#include "cosparse/csv.hpp"
#include "cosparse/eval.hpp"
#include "cosparse/rng.hpp"
#include "cosparse/tensor_io.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace cosparse;

namespace {

constexpr const char* kIntensityFile = "intensity.csaf";
constexpr const char* kDepthGtFile = "depth_gt.csaf";
constexpr const char* kSemanticsGtFile = "semantics_gt.csaf";
constexpr const char* kObservedDepthFile = "observed_depth.csaf";
constexpr const char* kObservedMaskFile = "observed_mask.csaf";
constexpr const char* kNoisySemanticsFile = "noisy_semantics.csaf";
constexpr const char* kOpIntensityFile = "omega_intensity.csaf";
constexpr const char* kOpDepthFile = "omega_depth.csaf";
constexpr const char* kOpSemanticsFile = "omega_semantics.csaf";

std::string join(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

void require_file(const std::string& path) {
  require(fs::exists(path), Errc::IoFailure, "missing input file: " + path);
}

ScalarField load_scalar(const std::string& path) {
  require_file(path);
  return scalar_from_tensor(read_tensor(path));
}

SemanticField load_semantics(const std::string& path, bool normalized) {
  require_file(path);
  return semantic_from_tensor(read_tensor(path), normalized);
}

// depth values can live on any scale; previews are range-normalized
void write_preview(const std::string& path, const ScalarField& field) {
  double lo = field.values.empty() ? 0.0 : field.values[0];
  double hi = lo;
  for (double v : field.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  ScalarField scaled = field;
  scaled.mask.clear();
  const double span = hi - lo;
  for (double& v : scaled.values) v = span > 0.0 ? (v - lo) / span : 0.0;
  write_pgm(path, scaled);
}

DownsampleOp op_for_mask(const ScalarField& observed) {
  require(observed.has_mask(), Errc::NoObservations, "mask required");
  if (auto factor = detect_grid_factor(observed.mask, observed.height,
                                       observed.width)) {
    return DownsampleOp::grid(*factor);
  }
  return DownsampleOp::from_mask(observed.height, observed.width, observed.mask);
}

int cmd_gen(const cli::Settings& settings, const std::string& out_dir,
            bool with_observations) {
  const BenchConfig& config = settings.bench;
  fs::create_directories(out_dir);
  const Scene scene = gen_scene(config.scene);
  write_tensor(join(out_dir, kIntensityFile), to_tensor(scene.intensity));
  write_tensor(join(out_dir, kDepthGtFile), to_tensor(scene.depth));
  write_tensor(join(out_dir, kSemanticsGtFile), to_tensor(scene.semantics));
  write_preview(join(out_dir, "intensity.pgm"), scene.intensity);
  write_preview(join(out_dir, "depth_gt.pgm"), scene.depth);
  if (with_observations) {
    const DownsampleOp down = DownsampleOp::grid(config.factor);
    const ScalarField observed = apply_downsample(
        scene.depth, down, config.noise_sigma, config.scene.seed);
    const SemanticField noisy = corrupt_semantics(
        scene.semantics, config.flip_rate, config.softness, config.scene.seed);
    write_tensor(join(out_dir, kObservedDepthFile), to_tensor(observed));
    write_tensor(join(out_dir, kObservedMaskFile), mask_to_tensor(observed));
    write_tensor(join(out_dir, kNoisySemanticsFile), to_tensor(noisy));
  }
  return 0;
}

int cmd_train(const cli::Settings& settings, const std::string& mode,
              const std::string& data_dir, const std::string& out_dir) {
  const BenchConfig& config = settings.bench;
  require(mode == "hr" || mode == "lr", Errc::BadConfig,
          "--mode must be hr or lr");
  const ScalarField intensity = load_scalar(join(data_dir, kIntensityFile));
  const SemanticField semantics =
      load_semantics(join(data_dir, kSemanticsGtFile), true);
  require(semantics.num_classes == config.learn.num_classes, Errc::DimMismatch,
          "scene.classes does not match the semantics file");

  const auto positions = sample_patch_positions(
      intensity.height, intensity.width, config.learn.patch_side,
      config.train_patches, derive_seed(config.learn.seed, 16));

  fs::create_directories(out_dir);
  OperatorTriple ops;
  std::vector<std::vector<std::string>> trace_rows;
  std::vector<std::string> trace_header;
  if (mode == "hr") {
    const ScalarField depth = load_scalar(join(data_dir, kDepthGtFile));
    const HrTrainingSet set = build_hr_training_set(intensity, depth, semantics,
                                                    positions, config.learn);
    std::vector<CgTraceRow> trace;
    ops = learn_hr(set, config.learn, &trace);
    trace_header = {"iter", "cost", "grad_norm", "step"};
    for (const auto& row : trace) {
      trace_rows.push_back({format_int(row.iter), format_double(row.cost),
                            format_double(row.grad_norm),
                            format_double(row.step)});
    }
  } else {
    ScalarField observed = load_scalar(join(data_dir, kObservedDepthFile));
    attach_mask(observed, read_tensor(join(data_dir, kObservedMaskFile)));
    const DownsampleOp down = op_for_mask(observed);
    LrTrainingSet set = build_lr_training_set(intensity, observed, down,
                                              semantics, positions, config.learn);
    const LrLearnResult learned = learn_lr(std::move(set), config.learn);
    ops = learned.ops;
    trace_header = {"round", "objective"};
    for (std::size_t i = 0; i < learned.outer_objectives.size(); ++i) {
      trace_rows.push_back({format_int(static_cast<long long>(i)),
                            format_double(learned.outer_objectives[i])});
    }
  }
  save_operator(join(out_dir, kOpIntensityFile), ops.intensity);
  save_operator(join(out_dir, kOpDepthFile), ops.depth);
  save_operator(join(out_dir, kOpSemanticsFile), ops.semantics);
  write_csv(join(out_dir, "trace.csv"), trace_header, trace_rows);
  return 0;
}

int cmd_sr(const cli::Settings& settings, const std::string& image_path,
           const std::string& depth_path, const std::string& mask_path,
           const std::string& semantics_path, const std::string& ops_dir,
           const std::string& out_dir, const std::string& gt_path) {
  const BenchConfig& config = settings.bench;
  SrProblem problem;
  problem.intensity = load_scalar(image_path);
  problem.observed_depth = load_scalar(depth_path);
  require_file(mask_path);
  attach_mask(problem.observed_depth, read_tensor(mask_path));
  problem.noisy_semantics = load_semantics(semantics_path, false);
  require_file(join(ops_dir, kOpIntensityFile));
  problem.op_intensity =
      load_operator(join(ops_dir, kOpIntensityFile), Modality::Intensity);
  problem.op_depth = load_operator(join(ops_dir, kOpDepthFile), Modality::Depth);
  problem.op_semantics =
      load_operator(join(ops_dir, kOpSemanticsFile), Modality::Semantics);
  problem.weights = config.learn.weights;
  problem.downsample = op_for_mask(problem.observed_depth);
  problem.schedule = config.schedule;
  problem.cg = config.sr_cg;

  ScalarField ground_truth;
  const bool has_gt = !gt_path.empty();
  if (has_gt) ground_truth = load_scalar(gt_path);

  const SrResult result =
      superresolve(problem, has_gt ? &ground_truth : nullptr);

  fs::create_directories(out_dir);
  write_tensor(join(out_dir, "d_star.csaf"), to_tensor(result.depth));
  write_tensor(join(out_dir, "s_star.csaf"), to_tensor(result.semantics));
  write_preview(join(out_dir, "d_star.pgm"), result.depth);
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : result.rounds) {
    rows.push_back({format_int(row.round), format_double(row.eta),
                    format_double(row.lambda), format_int(row.iters),
                    format_double(row.objective),
                    row.has_rmse ? format_double(row.rmse) : ""});
  }
  write_csv(join(out_dir, "trace.csv"),
            {"round", "eta", "lambda", "iters", "objective", "rmse"}, rows);
  return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& gt_path,
             const std::string& baseline_path, const std::string& sem_pred_path,
             const std::string& sem_gt_path, const std::string& out_csv) {
  const ScalarField pred = load_scalar(pred_path);
  const ScalarField gt = load_scalar(gt_path);
  MetricsReport report;
  report.rmse_value = rmse(pred, gt);
  if (!baseline_path.empty()) {
    const ScalarField baseline = load_scalar(baseline_path);
    report.has_relative_improvement = true;
    report.relative_improvement_value =
        relative_improvement(report.rmse_value, rmse(baseline, gt));
  }
  if (!sem_pred_path.empty()) {
    require(!sem_gt_path.empty(), Errc::BadConfig,
            "--sem-pred requires --sem-gt");
    const SemanticField sem_pred = load_semantics(sem_pred_path, false);
    const SemanticField sem_gt = load_semantics(sem_gt_path, false);
    const LabelAccuracy accuracy = label_accuracy(sem_pred, sem_gt);
    report.has_labels = true;
    report.per_pixel_accuracy = accuracy.per_pixel;
    report.per_class_accuracy = accuracy.per_class;
  }
  std::vector<std::vector<std::string>> rows;
  rows.push_back(metrics_csv_row("image", report));
  rows.push_back(metrics_csv_row("aggregate", report));
  write_csv(out_csv, metrics_csv_header(), rows);
  return 0;
}

int cmd_bench(const cli::Settings& settings, const std::string& out_csv,
              const std::string& trace_dir) {
  const BenchConfig& config = settings.bench;
  const std::vector<BenchSeedResult> results = run_bench(config);
  if (!out_csv.empty()) {
    if (fs::path(out_csv).has_parent_path()) {
      fs::create_directories(fs::path(out_csv).parent_path());
    }
    write_csv(out_csv, bench_csv_header(), bench_csv_rows(results));
  }
  if (!trace_dir.empty()) {
    fs::create_directories(trace_dir);
    for (const auto& seed : results) {
      const std::string tag = format_int(seed.seed_index);
      std::vector<std::vector<std::string>> outer;
      for (std::size_t i = 0; i < seed.lr_outer_objectives.size(); ++i) {
        outer.push_back({format_int(static_cast<long long>(i)),
                         format_double(seed.lr_outer_objectives[i])});
      }
      write_csv((fs::path(trace_dir) / ("lr_outer_seed" + tag + ".csv")).string(),
                {"round", "objective"}, outer);
      auto dump_rounds =
          [&](const std::string& method,
              const std::vector<std::vector<CgTraceRow>>& rounds) {
            std::vector<std::vector<std::string>> rows;
            for (std::size_t r = 0; r < rounds.size(); ++r) {
              for (const auto& it : rounds[r]) {
                rows.push_back({format_int(static_cast<long long>(r)),
                                format_int(it.iter), format_double(it.cost),
                                format_double(it.grad_norm),
                                format_double(it.step)});
              }
            }
            write_csv((fs::path(trace_dir) /
                       ("sr_" + method + "_seed" + tag + ".csv"))
                          .string(),
                      {"round", "iter", "cost", "grad_norm", "step"}, rows);
          };
      dump_rounds("ours-hr", seed.sr_hr_round_traces);
      dump_rounds("ours-lr", seed.sr_lr_round_traces);
    }
  }
  // console summary
  for (const auto& row : bench_csv_rows(results)) {
    if (row[0] == "mean" || row[0] == "win_rate") {
      std::cout << row[0] << " " << row[1] << " rmse=" << row[2] << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trimodal co-sparse depth super-resolution pipeline"};
  app.require_subcommand(1);

  std::string config_path, out_path, mode = "hr", data_dir, ops_dir;
  std::string image_path, depth_path, mask_path, semantics_path, gt_path;
  std::string pred_path, baseline_path, sem_pred_path, sem_gt_path, trace_dir;
  std::vector<std::string> overrides;
  bool with_observations = false;
  int seeds_flag = -1, factor_flag = -1;

  auto add_common = [&](CLI::App* cmd, bool with_config) {
    if (with_config) {
      cmd->add_option("--config,--spec", config_path, "key=value config file");
    }
    cmd->add_option("--set", overrides, "override config values (key=value)");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic scene");
  add_common(gen, true);
  gen->add_option("--out", out_path, "output directory")->required();
  gen->add_flag("--observe", with_observations,
                "also write downsampled depth and corrupted semantics");

  CLI::App* train = app.add_subcommand("train", "learn analysis operators");
  add_common(train, true);
  train->add_option("--mode", mode, "hr or lr")->required();
  train->add_option("--data", data_dir, "scene directory")->required();
  train->add_option("--out", out_path, "operator output directory")->required();

  CLI::App* sr = app.add_subcommand("sr", "super-resolve depth + denoise labels");
  add_common(sr, true);
  sr->add_option("--image", image_path, "intensity tensor")->required();
  sr->add_option("--depth", depth_path, "observed depth tensor")->required();
  sr->add_option("--mask", mask_path, "observation mask tensor")->required();
  sr->add_option("--semantics", semantics_path, "noisy semantics tensor")->required();
  sr->add_option("--ops", ops_dir, "operator directory")->required();
  sr->add_option("--out", out_path, "output directory")->required();
  sr->add_option("--gt", gt_path, "optional ground-truth depth for the trace");

  CLI::App* eval_cmd = app.add_subcommand("eval", "score predictions");
  eval_cmd->add_option("--pred", pred_path, "predicted depth tensor")->required();
  eval_cmd->add_option("--gt", gt_path, "ground-truth depth tensor")->required();
  eval_cmd->add_option("--baseline", baseline_path, "baseline depth tensor");
  eval_cmd->add_option("--sem-pred", sem_pred_path, "predicted semantics tensor");
  eval_cmd->add_option("--sem-gt", sem_gt_path, "ground-truth semantics tensor");
  eval_cmd->add_option("--out", out_path, "metrics CSV path")->required();

  CLI::App* bench = app.add_subcommand("bench", "run the seeded synthetic suite");
  add_common(bench, true);
  bench->add_option("--seeds", seeds_flag, "number of seeds");
  bench->add_option("--factor", factor_flag, "downsampling factor");
  bench->add_option("--out", out_path, "results CSV path")->required();
  bench->add_option("--trace-dir", trace_dir, "directory for per-seed traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    cli::Settings settings;
    if (!config_path.empty()) settings.apply_file(config_path);
    settings.apply_overrides(overrides);
    if (seeds_flag > 0) settings.bench.num_seeds = seeds_flag;
    if (factor_flag > 0) settings.bench.factor = factor_flag;

    if (gen->parsed()) return cmd_gen(settings, out_path, with_observations);
    if (train->parsed()) return cmd_train(settings, mode, data_dir, out_path);
    if (sr->parsed()) {
      return cmd_sr(settings, image_path, depth_path, mask_path, semantics_path,
                    ops_dir, out_path, gt_path);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(pred_path, gt_path, baseline_path, sem_pred_path,
                      sem_gt_path, out_path);
    }
    if (bench->parsed()) return cmd_bench(settings, out_path, trace_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return errc_is_numeric(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

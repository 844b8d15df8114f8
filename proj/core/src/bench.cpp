#include "cosparse/bench.hpp"

#include "cosparse/csv.hpp"
#include "cosparse/eval.hpp"
#include "cosparse/parallel.hpp"
#include "cosparse/rng.hpp"

namespace cosparse {

BenchConfig BenchConfig::defaults() {
  BenchConfig config;
  config.num_seeds = 20;
  config.factor = 4;
  config.base_seed = 1;
  config.scene = SceneSpec{};  // 64x64, 5 regions, 3 classes, 2 shadow bands
  config.noise_sigma = 0.0;
  config.flip_rate = 0.2;
  config.softness = 0.25;
  config.train_patches = 256;

  config.learn.eta = 30.0;
  config.learn.patch_side = 5;
  config.learn.num_classes = config.scene.num_classes;
  config.learn.lr_outer_iters = 6;
  config.learn.seed = 0;  // overridden per seed
  config.learn.cg.max_iters = 120;
  config.learn.cg.grad_tol = 1e-5;
  config.learn.depth_cg.max_iters = 60;
  config.learn.depth_cg.grad_tol = 1e-7;

  config.schedule = AnnealSchedule{};  // 30 -> 0.04 over 10 restarts, rho 1
  config.sr_cg.max_iters = 25;
  config.sr_cg.grad_tol = 1e-8;
  return config;
}

void BenchConfig::validate() const {
  require(num_seeds >= 1, Errc::InvalidArgument, "num_seeds < 1");
  require(factor >= 1, Errc::InvalidArgument, "factor < 1");
  require(train_patches >= 1, Errc::InvalidArgument, "train_patches < 1");
  scene.validate();
  learn.validate();
  schedule.validate();
  sr_cg.validate();
  require(noise_sigma >= 0.0, Errc::InvalidArgument, "noise_sigma < 0");
  require(flip_rate >= 0.0 && flip_rate <= 1.0, Errc::BadRate, "flip_rate");
  require(softness >= 0.0 && softness <= 1.0, Errc::BadRate, "softness");
  require(scene.num_classes == learn.num_classes, Errc::InvalidArgument,
          "scene and learning class counts disagree");
}

namespace {

BenchSeedResult run_seed(const BenchConfig& config, int index) {
  BenchSeedResult result;
  result.seed_index = index;
  const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(index);

  SceneSpec test_spec = config.scene;
  test_spec.seed = derive_seed(seed, 10);
  const Scene test = gen_scene(test_spec);

  SceneSpec train_spec = config.scene;
  train_spec.seed = derive_seed(seed, 11);
  const Scene train = gen_scene(train_spec);

  const DownsampleOp down = DownsampleOp::grid(config.factor);
  const ScalarField observed_test =
      apply_downsample(test.depth, down, config.noise_sigma, derive_seed(seed, 12));
  const ScalarField observed_train =
      apply_downsample(train.depth, down, config.noise_sigma, derive_seed(seed, 13));
  const SemanticField noisy_semantics = corrupt_semantics(
      test.semantics, config.flip_rate, config.softness, derive_seed(seed, 14));

  const LabelAccuracy noisy_accuracy =
      label_accuracy(noisy_semantics, test.semantics);
  result.noisy_per_pixel = noisy_accuracy.per_pixel;
  result.noisy_per_class = noisy_accuracy.per_class;

  // training
  LearnConfig learn_config = config.learn;
  learn_config.seed = derive_seed(seed, 15);
  const auto positions = sample_patch_positions(
      train.intensity.height, train.intensity.width, learn_config.patch_side,
      config.train_patches, derive_seed(seed, 16));

  const HrTrainingSet hr_set = build_hr_training_set(
      train.intensity, train.depth, train.semantics, positions, learn_config);
  const OperatorTriple hr_ops = learn_hr(hr_set, learn_config);

  LrTrainingSet lr_set = build_lr_training_set(
      train.intensity, observed_train, down, train.semantics, positions,
      learn_config);
  LrLearnResult lr_learned = learn_lr(std::move(lr_set), learn_config);
  result.lr_outer_objectives = lr_learned.outer_objectives;

  // reconstruction
  auto make_problem = [&](const OperatorTriple& ops) {
    SrProblem problem;
    problem.intensity = test.intensity;
    problem.observed_depth = observed_test;
    problem.noisy_semantics = noisy_semantics;
    problem.op_intensity = ops.intensity;
    problem.op_depth = ops.depth;
    problem.op_semantics = ops.semantics;
    problem.weights = config.learn.weights;
    problem.downsample = down;
    problem.schedule = config.schedule;
    problem.cg = config.sr_cg;
    return problem;
  };

  auto score_depth = [&](const std::string& name, const ScalarField& estimate) {
    BenchMethodRow row;
    row.method = name;
    row.rmse = rmse(estimate, test.depth);
    return row;
  };

  result.methods.push_back(
      score_depth("nearest", baseline_nearest(observed_test, down)));
  result.methods.push_back(
      score_depth("bicubic", baseline_bicubic(observed_test, down)));

  {
    const SrResult sr = superresolve(make_problem(hr_ops), &test.depth);
    BenchMethodRow row = score_depth("ours-hr", sr.depth);
    const LabelAccuracy accuracy = label_accuracy(sr.semantics, test.semantics);
    row.has_labels = true;
    row.per_pixel = accuracy.per_pixel;
    row.per_class = accuracy.per_class;
    result.methods.push_back(row);
    result.sr_hr_round_traces = sr.round_iterations;
  }
  {
    const SrResult sr = superresolve(make_problem(lr_learned.ops), &test.depth);
    BenchMethodRow row = score_depth("ours-lr", sr.depth);
    const LabelAccuracy accuracy = label_accuracy(sr.semantics, test.semantics);
    row.has_labels = true;
    row.per_pixel = accuracy.per_pixel;
    row.per_class = accuracy.per_class;
    result.methods.push_back(row);
    result.sr_lr_round_traces = sr.round_iterations;
  }
  return result;
}

}  // namespace

std::vector<BenchSeedResult> run_bench(
    const BenchConfig& config,
    const std::function<void(const BenchSeedResult&)>& progress) {
  config.validate();
  std::vector<BenchSeedResult> results(config.num_seeds);
  // seeds are independent; parallelize across them and report in seed order
  parallel_for_chunks(config.num_seeds, 1,
                      [&](std::int64_t, std::int64_t begin, std::int64_t) {
                        results[begin] = run_seed(config, static_cast<int>(begin));
                      });
  if (progress) {
    for (const auto& seed : results) progress(seed);
  }
  return results;
}

const BenchMethodRow& find_method(const BenchSeedResult& seed,
                                  const std::string& method) {
  for (const auto& row : seed.methods) {
    if (row.method == method) return row;
  }
  raise(Errc::InvalidArgument, "unknown method: " + method);
}

std::vector<std::string> bench_csv_header() {
  return {"seed",          "method",        "rmse",
          "per_pixel_acc", "per_class_acc", "rel_improvement_vs_bicubic"};
}

std::vector<std::vector<std::string>> bench_csv_rows(
    const std::vector<BenchSeedResult>& results) {
  std::vector<std::vector<std::string>> rows;
  const std::vector<std::string> methods = {"nearest", "bicubic", "ours-hr",
                                            "ours-lr"};
  for (const auto& seed : results) {
    const double bicubic_rmse = find_method(seed, "bicubic").rmse;
    for (const auto& method : methods) {
      const BenchMethodRow& row = find_method(seed, method);
      std::vector<std::string> cells(6);
      cells[0] = format_int(seed.seed_index);
      cells[1] = method;
      cells[2] = format_double(row.rmse);
      cells[3] = row.has_labels ? format_double(row.per_pixel) : "";
      cells[4] = row.has_labels ? format_double(row.per_class) : "";
      cells[5] = (method == "ours-hr" || method == "ours-lr")
                     ? format_double(relative_improvement(row.rmse, bicubic_rmse))
                     : "";
      rows.push_back(std::move(cells));
    }
  }
  // aggregates
  for (const auto& method : methods) {
    double rmse_sum = 0.0, pixel_sum = 0.0, class_sum = 0.0;
    bool labels = false;
    for (const auto& seed : results) {
      const BenchMethodRow& row = find_method(seed, method);
      rmse_sum += row.rmse;
      if (row.has_labels) {
        labels = true;
        pixel_sum += row.per_pixel;
        class_sum += row.per_class;
      }
    }
    const double n = static_cast<double>(results.size());
    std::vector<std::string> cells(6);
    cells[0] = "mean";
    cells[1] = method;
    cells[2] = format_double(rmse_sum / n);
    cells[3] = labels ? format_double(pixel_sum / n) : "";
    cells[4] = labels ? format_double(class_sum / n) : "";
    cells[5] = "";
    rows.push_back(std::move(cells));
  }
  int wins = 0;
  for (const auto& seed : results) {
    if (find_method(seed, "ours-hr").rmse < find_method(seed, "bicubic").rmse) {
      ++wins;
    }
  }
  std::vector<std::string> win_row(6);
  win_row[0] = "win_rate";
  win_row[1] = "ours-hr_vs_bicubic";
  win_row[2] = format_double(static_cast<double>(wins) / results.size());
  rows.push_back(std::move(win_row));
  return rows;
}

}  // namespace cosparse

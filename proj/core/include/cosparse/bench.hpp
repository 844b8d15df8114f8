#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cosparse/learning.hpp"
#include "cosparse/simulate.hpp"
#include "cosparse/superres.hpp"

namespace cosparse {

// Seeded end-to-end suite: per seed, generate a train and a test scene,
// train operators (high- and low-resolution variants) on the train scene,
// then super-resolve the test scene with each method and score against
// ground truth.
struct BenchConfig {
  int num_seeds = 20;
  int factor = 4;
  std::uint64_t base_seed = 1;
  SceneSpec scene{};
  double noise_sigma = 0.0;
  double flip_rate = 0.2;
  double softness = 0.25;
  int train_patches = 256;
  LearnConfig learn{};
  AnnealSchedule schedule{};
  CgConfig sr_cg{};

  // The configuration the synthetic acceptance suite runs with.
  static BenchConfig defaults();
  void validate() const;
};

struct BenchMethodRow {
  std::string method;
  double rmse = 0.0;
  bool has_labels = false;
  double per_pixel = 0.0;
  double per_class = 0.0;
};

struct BenchSeedResult {
  int seed_index = 0;
  double noisy_per_pixel = 0.0;
  double noisy_per_class = 0.0;
  std::vector<BenchMethodRow> methods;  // nearest, bicubic, ours-hr, ours-lr
  std::vector<double> lr_outer_objectives;
  std::vector<std::vector<CgTraceRow>> sr_hr_round_traces;
  std::vector<std::vector<CgTraceRow>> sr_lr_round_traces;
};

std::vector<BenchSeedResult> run_bench(
    const BenchConfig& config,
    const std::function<void(const BenchSeedResult&)>& progress = {});

const BenchMethodRow& find_method(const BenchSeedResult& seed,
                                  const std::string& method);

std::vector<std::string> bench_csv_header();
// Per-(seed, method) rows followed by per-method mean rows and the
// ours-hr vs bicubic win-rate row.
std::vector<std::vector<std::string>> bench_csv_rows(
    const std::vector<BenchSeedResult>& results);

}  // namespace cosparse

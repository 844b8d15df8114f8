#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "cosparse/downsample.hpp"
#include "cosparse/manifold.hpp"
#include "cosparse/sparsity.hpp"

namespace cosparse {

struct LearnConfig {
  double eta = 30.0;  // weight of the sparsity loss against the priors
  double kappa_intensity = 1.0, kappa_depth = 1.0, kappa_semantics = 1.0;
  double mu_intensity = 1.0, mu_depth = 1.0, mu_semantics = 1.0;
  ModalityWeights weights{};
  int operator_rows = 0;  // 0 = redundancy convention, ceil(1.2 * L * side^2)
  int patch_side = 5;
  int num_classes = 1;
  int lr_outer_iters = 10;
  CgConfig cg{};
  CgConfig depth_cg{.max_iters = 100, .grad_tol = 1e-7};
  std::uint64_t seed = 0;

  int resolved_rows() const;
  int intensity_dim() const { return patch_side * patch_side; }
  int depth_dim() const { return patch_side * patch_side; }
  int semantic_dim() const { return patch_side * patch_side * num_classes; }
  void validate() const;
};

// Aligned high-resolution patch triples.
struct HrTrainingSet {
  PatchMatrix intensity, depth, semantics;

  int count() const { return intensity.count(); }
  void validate(const LearnConfig& config) const;
};

// Intensity/semantic patches plus per-patch sparse depth observations. The
// measurement operator is the masked identity on the patch grid;
// depth_estimates holds the current dense reconstructions in raw units (the
// sparsity term sees them re-centered, matching the HR pipeline).
struct LrTrainingSet {
  PatchMatrix intensity, semantics;
  Eigen::MatrixXd observed_values;  // n_D x M, zero where unobserved
  Eigen::MatrixXd observed_mask;    // n_D x M of 0/1
  Eigen::MatrixXd depth_estimates;  // n_D x M

  int count() const { return intensity.count(); }
  void validate(const LearnConfig& config) const;
};

struct PriorValue {
  double value = 0.0;
  Eigen::MatrixXd grad;
};

// h(W) = -(1/(n log n)) logdet((1/k) W^T W); barrier against rank collapse.
PriorValue prior_h(const Eigen::MatrixXd& op);

// r(W) = -sum_{i<j} log(1 - <w_i, w_j>^2); barrier against coherent rows.
PriorValue prior_r(const Eigen::MatrixXd& op);

// eta * L_s + L_c over the product manifold point {W_I, W_D, W_S}.
double hr_objective(const MatrixList& ops, const HrTrainingSet& training,
                    const LearnConfig& config, MatrixList* grads);

struct OperatorTriple {
  AnalysisOperator intensity, depth, semantics;

  MatrixList matrices() const {
    return {intensity.entries, depth.entries, semantics.entries};
  }
};

OperatorTriple learn_hr(const HrTrainingSet& training, const LearnConfig& config,
                        std::vector<CgTraceRow>* trace = nullptr);

// One alternation half-step: depth estimates are optimized per patch with
// the operators held fixed. Each patch minimizes
//   eta * g(W_I I_m, W_D centered(D_m), W_S S_m) + ||masked(D_m - observed)||^2
void lr_depth_step(const MatrixList& ops, LrTrainingSet& training,
                   const LearnConfig& config);

// Full low-resolution objective (sparsity + priors + data term), for traces.
double lr_total_objective(const MatrixList& ops, const LrTrainingSet& training,
                          const LearnConfig& config);

struct LrLearnResult {
  OperatorTriple ops;
  Eigen::MatrixXd depth_estimates;
  std::vector<double> outer_objectives;  // lr_outer_iters + 1 entries
};

LrLearnResult learn_lr(LrTrainingSet training, const LearnConfig& config,
                       std::vector<CgTraceRow>* operator_trace = nullptr);

// --- training-set construction ---

// Random interior patch centers, unique, deterministic per seed. count is
// clamped to the number of admissible positions.
std::vector<std::array<int, 2>> sample_patch_positions(int height, int width,
                                                       int patch_side, int count,
                                                       std::uint64_t seed);

HrTrainingSet build_hr_training_set(const ScalarField& intensity,
                                    const ScalarField& depth,
                                    const SemanticField& semantics,
                                    const std::vector<std::array<int, 2>>& positions,
                                    const LearnConfig& config);

// observed must carry a mask; depth estimates are initialized from
// interpolate_observations.
LrTrainingSet build_lr_training_set(const ScalarField& intensity,
                                    const ScalarField& observed,
                                    const DownsampleOp& downsample,
                                    const SemanticField& semantics,
                                    const std::vector<std::array<int, 2>>& positions,
                                    const LearnConfig& config);

}  // namespace cosparse

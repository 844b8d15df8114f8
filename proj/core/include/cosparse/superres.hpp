#pragma once

#include <Eigen/Core>
#include <vector>

#include "cosparse/downsample.hpp"
#include "cosparse/manifold.hpp"
#include "cosparse/sparsity.hpp"

namespace cosparse {

// Decreasing regularizer schedule: round t of `restarts` uses
//   eta_t = eta_start * (eta_end / eta_start)^(t / (restarts - 1))
// (geometric ladder; a single round uses eta_start) and lambda_t = rho * eta_t.
struct AnnealSchedule {
  double eta_start = 30.0;
  double eta_end = 0.04;
  int restarts = 10;
  double rho = 1.0;

  double eta_at(int round) const;
  void validate() const;
};

struct SrProblem {
  ScalarField intensity;
  ScalarField observed_depth;  // mask marks the m observations
  SemanticField noisy_semantics;
  AnalysisOperator op_intensity, op_depth, op_semantics;
  ModalityWeights weights{};
  DownsampleOp downsample = DownsampleOp::grid(1);
  AnnealSchedule schedule{};
  CgConfig cg{.max_iters = 50, .grad_tol = 1e-8};

  int patch_side() const;
  int num_classes() const { return noisy_semantics.num_classes; }
  void validate() const;
};

struct DataTermValue {
  double cost = 0.0;
  Eigen::VectorXd grad_depth;
  Eigen::VectorXd grad_semantics;
};

// E_d = ||A D - observed||^2 + lambda ||S - noisy||^2 with A the masked
// identity at the observed pixels.
DataTermValue data_term(const Eigen::VectorXd& depth,
                        const Eigen::VectorXd& semantics,
                        const SrProblem& problem, double lambda);

struct SmoothnessValue {
  double cost = 0.0;
  Eigen::VectorXd grad_depth;
  Eigen::VectorXd grad_semantics;
};

// E_s = mean over interior patches of g applied to the three responses (the
// intensity responses are fixed by the problem).
SmoothnessValue smoothness_term(const Eigen::VectorXd& depth,
                                const Eigen::VectorXd& semantics,
                                const SrProblem& problem);

struct SrTraceRow {
  int round = 0;
  double eta = 0.0;
  double lambda = 0.0;
  int iters = 0;
  double objective = 0.0;
  bool has_rmse = false;
  double rmse = 0.0;
};

struct SrResult {
  ScalarField depth;
  SemanticField semantics;
  std::vector<SrTraceRow> rounds;
  std::vector<std::vector<CgTraceRow>> round_iterations;
};

// Joint depth super-resolution and semantic denoising (annealed restarts of
// Euclidean CG). Depth starts from interpolated observations, semantics from
// the noisy field; the semantic output is clamped to [0,1] and per-pixel
// renormalized once at the end.
SrResult superresolve(const SrProblem& problem,
                      const ScalarField* ground_truth = nullptr);

// argmax over classes, ties broken by the lowest class index
std::vector<int> hard_labels(const SemanticField& field);

}  // namespace cosparse

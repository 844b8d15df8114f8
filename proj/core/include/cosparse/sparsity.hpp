#pragma once

#include <Eigen/Core>
#include <vector>

#include "cosparse/patches.hpp"

namespace cosparse {

struct ModalityWeights {
  double nu_intensity = 3.0;
  double nu_depth = 3.0;
  double nu_semantics = 30.0;

  void validate() const;
};

// Row indices (0-based) whose response magnitude is at or below the
// tolerance. Diagnostic only; the optimization never thresholds.
struct CoSupport {
  std::vector<int> indices;
  double tolerance = 0.0;
};

// sum_j log(1 + nu_I rI_j^2 + nu_D rD_j^2 + nu_S rS_j^2)
double g_cost(const Eigen::VectorXd& resp_intensity,
              const Eigen::VectorXd& resp_depth,
              const Eigen::VectorXd& resp_semantics,
              const ModalityWeights& weights);

struct ResponseGrads {
  Eigen::VectorXd intensity, depth, semantics;
};

// d g / d r_X, component j: 2 nu_X r_Xj / (1 + sum_Y nu_Y r_Yj^2)
ResponseGrads g_grad_responses(const Eigen::VectorXd& resp_intensity,
                               const Eigen::VectorXd& resp_depth,
                               const Eigen::VectorXd& resp_semantics,
                               const ModalityWeights& weights);

CoSupport co_support(const Eigen::VectorXd& response, double tolerance);

// Response-space core shared by learning and reconstruction: cost summed
// over all columns (no normalization), with optional gradients w.r.t. the
// depth / semantic response matrices written in place. Column-chunked so the
// work parallelizes with a fixed reduction order.
double trimodal_response_cost(const Eigen::MatrixXd& resp_intensity,
                              const Eigen::MatrixXd& resp_depth,
                              const Eigen::MatrixXd& resp_semantics,
                              const ModalityWeights& weights,
                              Eigen::MatrixXd* dresp_depth = nullptr,
                              Eigen::MatrixXd* dresp_semantics = nullptr,
                              Eigen::MatrixXd* dresp_intensity = nullptr);

struct BatchOptions {
  bool operator_grads = true;
  bool patch_grads = false;
};

struct BatchResult {
  double cost = 0.0;
  Eigen::MatrixXd grad_op_intensity, grad_op_depth, grad_op_semantics;
  Eigen::MatrixXd grad_patch_depth, grad_patch_semantics;
};

// Mean over M aligned patch columns of g applied to the three responses,
// with exact Euclidean gradients w.r.t. the operators and (optionally) the
// depth/semantic patch columns.
BatchResult batch_cost_and_grads(const Eigen::MatrixXd& op_intensity,
                                 const Eigen::MatrixXd& op_depth,
                                 const Eigen::MatrixXd& op_semantics,
                                 const PatchMatrix& patches_intensity,
                                 const PatchMatrix& patches_depth,
                                 const PatchMatrix& patches_semantics,
                                 const ModalityWeights& weights,
                                 const BatchOptions& options = {});

// C = A * B evaluated over fixed column chunks of B (parallel, deterministic).
void product_by_columns(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        Eigen::MatrixXd& out);

// out = G * P^T accumulated chunk-by-chunk over columns in fixed order.
void accumulate_outer(const Eigen::MatrixXd& g, const Eigen::MatrixXd& p,
                      Eigen::MatrixXd& out);

}  // namespace cosparse

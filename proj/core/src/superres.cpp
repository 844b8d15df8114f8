#include "cosparse/superres.hpp"

#include <cmath>

#include "cosparse/eval.hpp"
#include "cosparse/patches.hpp"

namespace cosparse {

double AnnealSchedule::eta_at(int round) const {
  if (restarts <= 1) return eta_start;
  const double exponent = static_cast<double>(round) / (restarts - 1);
  return eta_start * std::pow(eta_end / eta_start, exponent);
}

void AnnealSchedule::validate() const {
  require(eta_end > 0.0 && eta_start >= eta_end, Errc::InvalidArgument,
          "need eta_start >= eta_end > 0");
  require(restarts >= 1, Errc::InvalidArgument, "restarts < 1");
  require(rho >= 0.0, Errc::InvalidArgument, "rho < 0");
}

int SrProblem::patch_side() const {
  const int n = op_intensity.cols();
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  require(side * side == n, Errc::BadDims,
          "intensity operator columns are not a square patch");
  return side;
}

void SrProblem::validate() const {
  intensity.validate();
  observed_depth.validate();
  noisy_semantics.validate();
  require(intensity.width == observed_depth.width &&
              intensity.height == observed_depth.height &&
              intensity.width == noisy_semantics.width &&
              intensity.height == noisy_semantics.height,
          Errc::DimMismatch, "input grids disagree");
  require(observed_depth.has_mask(), Errc::NoObservations,
          "observed depth needs a mask");
  require(observed_depth.observed_count() >= 1, Errc::NoObservations,
          "mask has no observed pixels");
  op_intensity.validate(1e-6);
  op_depth.validate(1e-6);
  op_semantics.validate(1e-6);
  const int k = op_intensity.rows();
  require(op_depth.rows() == k && op_semantics.rows() == k, Errc::DimMismatch,
          "operators must share the row count");
  const int side = patch_side();
  require(op_depth.cols() == side * side, Errc::DimMismatch,
          "depth operator patch dim");
  require(op_semantics.cols() == side * side * noisy_semantics.num_classes,
          Errc::DimMismatch, "semantic operator patch dim");
  weights.validate();
  schedule.validate();
  cg.validate();
}

DataTermValue data_term(const Eigen::VectorXd& depth,
                        const Eigen::VectorXd& semantics,
                        const SrProblem& problem, double lambda) {
  const int pixels = problem.observed_depth.size();
  const int classes = problem.noisy_semantics.num_classes;
  require(depth.size() == pixels, Errc::DimMismatch, "depth length");
  require(semantics.size() == static_cast<Eigen::Index>(pixels) * classes,
          Errc::DimMismatch, "semantics length");
  require(lambda >= 0.0, Errc::InvalidArgument, "lambda < 0");

  DataTermValue value;
  value.grad_depth.setZero(pixels);
  double cost = 0.0;
  for (int p = 0; p < pixels; ++p) {
    if (problem.observed_depth.mask[p] == 0) continue;
    const double residual = depth(p) - problem.observed_depth.values[p];
    cost += residual * residual;
    value.grad_depth(p) = 2.0 * residual;
  }
  value.grad_semantics.resize(semantics.size());
  for (Eigen::Index i = 0; i < semantics.size(); ++i) {
    const double residual = semantics(i) - problem.noisy_semantics.probs[i];
    cost += lambda * residual * residual;
    value.grad_semantics(i) = 2.0 * lambda * residual;
  }
  value.cost = cost;
  return value;
}

namespace {

// Preassembled reconstruction state: dense interior layouts, the constant
// intensity responses, and scratch buffers reused across evaluations.
struct SrContext {
  const SrProblem* problem = nullptr;
  PatchLayout depth_layout, semantic_layout;
  Eigen::MatrixXd resp_intensity;
  double inv_count = 0.0;
  int pixels = 0;

  Eigen::MatrixXd depth_patches, semantic_patches;
  Eigen::MatrixXd resp_depth, resp_semantics;
  Eigen::MatrixXd dresp_depth, dresp_semantics;
  Eigen::MatrixXd grad_patch_depth, grad_patch_semantics;

  explicit SrContext(const SrProblem& p) : problem(&p) {
    const int side = p.patch_side();
    const int height = p.intensity.height, width = p.intensity.width;
    depth_layout = dense_layout(height, width, side, 1);
    semantic_layout = dense_layout(height, width, side, p.num_classes());
    inv_count = 1.0 / depth_layout.count();
    pixels = p.intensity.size();

    Eigen::MatrixXd intensity_patches;
    extract_into(p.intensity.values.data(), height, width, depth_layout,
                 intensity_patches);
    product_by_columns(p.op_intensity.entries, intensity_patches, resp_intensity);
  }

  double smoothness(const Eigen::VectorXd& depth, const Eigen::VectorXd& semantics,
                    Eigen::VectorXd* grad_depth, Eigen::VectorXd* grad_semantics) {
    const SrProblem& p = *problem;
    const int height = p.intensity.height, width = p.intensity.width;
    extract_into(depth.data(), height, width, depth_layout, depth_patches);
    extract_into(semantics.data(), height, width, semantic_layout,
                 semantic_patches);
    product_by_columns(p.op_depth.entries, depth_patches, resp_depth);
    product_by_columns(p.op_semantics.entries, semantic_patches, resp_semantics);

    const bool want_grads = grad_depth != nullptr;
    double cost = trimodal_response_cost(
        resp_intensity, resp_depth, resp_semantics, p.weights,
        want_grads ? &dresp_depth : nullptr,
        want_grads ? &dresp_semantics : nullptr);
    cost *= inv_count;
    if (want_grads) {
      product_by_columns(p.op_depth.entries.transpose(), dresp_depth,
                         grad_patch_depth);
      product_by_columns(p.op_semantics.entries.transpose(), dresp_semantics,
                         grad_patch_semantics);
      grad_depth->resize(pixels);
      adjoint_scatter_into(grad_patch_depth, depth_layout, height, width,
                           grad_depth->data());
      *grad_depth *= inv_count;
      grad_semantics->resize(static_cast<Eigen::Index>(pixels) * p.num_classes());
      adjoint_scatter_into(grad_patch_semantics, semantic_layout, height, width,
                           grad_semantics->data());
      *grad_semantics *= inv_count;
    }
    return cost;
  }
};

}  // namespace

SmoothnessValue smoothness_term(const Eigen::VectorXd& depth,
                                const Eigen::VectorXd& semantics,
                                const SrProblem& problem) {
  problem.validate();
  const int pixels = problem.intensity.size();
  require(depth.size() == pixels, Errc::DimMismatch, "depth length");
  require(semantics.size() ==
              static_cast<Eigen::Index>(pixels) * problem.num_classes(),
          Errc::DimMismatch, "semantics length");
  SrContext context(problem);
  SmoothnessValue value;
  value.cost = context.smoothness(depth, semantics, &value.grad_depth,
                                  &value.grad_semantics);
  return value;
}

std::vector<int> hard_labels(const SemanticField& field) {
  require(field.num_classes >= 1, Errc::InvalidArgument, "no classes");
  std::vector<int> labels(static_cast<std::size_t>(field.pixels()));
  for (int p = 0; p < field.pixels(); ++p) {
    int best = 0;
    double best_value = field.probs[static_cast<std::size_t>(p) * field.num_classes];
    for (int c = 1; c < field.num_classes; ++c) {
      const double v = field.probs[static_cast<std::size_t>(p) * field.num_classes + c];
      if (v > best_value) {
        best_value = v;
        best = c;
      }
    }
    labels[p] = best;
  }
  return labels;
}

SrResult superresolve(const SrProblem& problem, const ScalarField* ground_truth) {
  problem.validate();
  if (ground_truth != nullptr) {
    require(ground_truth->width == problem.intensity.width &&
                ground_truth->height == problem.intensity.height,
            Errc::DimMismatch, "ground truth dims");
  }
  const int pixels = problem.intensity.size();
  const int classes = problem.num_classes();
  SrContext context(problem);

  const ScalarField initial =
      interpolate_observations(problem.observed_depth, problem.downsample);
  Eigen::VectorXd state(static_cast<Eigen::Index>(pixels) * (1 + classes));
  for (int p = 0; p < pixels; ++p) state(p) = initial.values[p];
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(pixels) * classes; ++i) {
    state(pixels + i) = problem.noisy_semantics.probs[i];
  }

  SrResult result;
  Eigen::VectorXd smooth_grad_depth, smooth_grad_semantics;
  for (int round = 0; round < problem.schedule.restarts; ++round) {
    const double eta = problem.schedule.eta_at(round);
    const double lambda = problem.schedule.rho * eta;
    double final_cost = 0.0;
    auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
      const Eigen::VectorXd depth = x.head(pixels);
      const Eigen::VectorXd semantics = x.tail(x.size() - pixels);
      const DataTermValue data = data_term(depth, semantics, problem, lambda);
      double cost;
      if (grad != nullptr) {
        cost = eta * context.smoothness(depth, semantics, &smooth_grad_depth,
                                        &smooth_grad_semantics) +
               data.cost;
        grad->resize(x.size());
        grad->head(pixels) = eta * smooth_grad_depth + data.grad_depth;
        grad->tail(x.size() - pixels) =
            eta * smooth_grad_semantics + data.grad_semantics;
      } else {
        cost = eta * context.smoothness(depth, semantics, nullptr, nullptr) +
               data.cost;
      }
      final_cost = cost;
      return cost;
    };
    std::vector<CgTraceRow> iterations;
    state = euclidean_cg(objective, std::move(state), problem.cg, &iterations);

    SrTraceRow row;
    row.round = round;
    row.eta = eta;
    row.lambda = lambda;
    row.iters = static_cast<int>(iterations.size()) - 1;
    row.objective = iterations.empty() ? final_cost : iterations.back().cost;
    if (ground_truth != nullptr) {
      ScalarField current(problem.intensity.height, problem.intensity.width);
      for (int p = 0; p < pixels; ++p) current.values[p] = state(p);
      row.has_rmse = true;
      row.rmse = rmse(current, *ground_truth);
    }
    result.round_iterations.push_back(std::move(iterations));
    result.rounds.push_back(row);
  }

  result.depth = ScalarField(problem.intensity.height, problem.intensity.width);
  for (int p = 0; p < pixels; ++p) result.depth.values[p] = state(p);

  result.semantics = SemanticField(problem.intensity.height,
                                   problem.intensity.width, classes);
  for (int p = 0; p < pixels; ++p) {
    double sum = 0.0;
    for (int c = 0; c < classes; ++c) {
      double v = state(pixels + static_cast<Eigen::Index>(p) * classes + c);
      v = std::min(1.0, std::max(0.0, v));
      result.semantics.probs[static_cast<std::size_t>(p) * classes + c] = v;
      sum += v;
    }
    for (int c = 0; c < classes; ++c) {
      double& v = result.semantics.probs[static_cast<std::size_t>(p) * classes + c];
      v = sum > 0.0 ? v / sum : 1.0 / classes;
    }
  }
  result.semantics.normalized = true;
  return result;
}

}  // namespace cosparse

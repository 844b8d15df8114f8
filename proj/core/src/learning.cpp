#include "cosparse/learning.hpp"

#include <Eigen/LU>
#include <cmath>

#include "cosparse/parallel.hpp"
#include "cosparse/rng.hpp"

namespace cosparse {

int LearnConfig::resolved_rows() const {
  if (operator_rows > 0) return operator_rows;
  const int largest = semantic_dim();
  return (6 * largest + 4) / 5;  // ceil(1.2 * largest)
}

void LearnConfig::validate() const {
  require(eta >= 0.0, Errc::InvalidArgument, "eta < 0");
  require(kappa_intensity >= 0 && kappa_depth >= 0 && kappa_semantics >= 0,
          Errc::InvalidArgument, "kappa weights must be nonnegative");
  require(mu_intensity >= 0 && mu_depth >= 0 && mu_semantics >= 0,
          Errc::InvalidArgument, "mu weights must be nonnegative");
  weights.validate();
  require(patch_side >= 1, Errc::InvalidArgument, "patch_side < 1");
  require(num_classes >= 1, Errc::InvalidArgument, "num_classes < 1");
  require(lr_outer_iters >= 0, Errc::InvalidArgument, "lr_outer_iters < 0");
  require(resolved_rows() >= semantic_dim(), Errc::BadDims,
          "operator rows must be at least the largest patch dimension");
  cg.validate();
  depth_cg.validate();
}

void HrTrainingSet::validate(const LearnConfig& config) const {
  require(count() >= 1, Errc::EmptySet, "empty training set");
  require(depth.count() == count() && semantics.count() == count(),
          Errc::DimMismatch, "modalities disagree on patch count");
  require(intensity.dim() == config.intensity_dim(), Errc::DimMismatch,
          "intensity patch dim");
  require(depth.dim() == config.depth_dim(), Errc::DimMismatch,
          "depth patch dim");
  require(semantics.dim() == config.semantic_dim(), Errc::DimMismatch,
          "semantic patch dim");
}

void LrTrainingSet::validate(const LearnConfig& config) const {
  require(count() >= 1, Errc::EmptySet, "empty training set");
  require(semantics.count() == count(), Errc::DimMismatch,
          "modalities disagree on patch count");
  require(intensity.dim() == config.intensity_dim(), Errc::DimMismatch,
          "intensity patch dim");
  require(semantics.dim() == config.semantic_dim(), Errc::DimMismatch,
          "semantic patch dim");
  const int n = config.depth_dim();
  require(observed_values.rows() == n && observed_mask.rows() == n &&
              depth_estimates.rows() == n,
          Errc::DimMismatch, "depth patch dim");
  require(observed_values.cols() == count() && observed_mask.cols() == count() &&
              depth_estimates.cols() == count(),
          Errc::DimMismatch, "depth columns disagree with patch count");
}

PriorValue prior_h(const Eigen::MatrixXd& op) {
  const Eigen::Index k = op.rows();
  const Eigen::Index n = op.cols();
  require(n >= 2, Errc::BadDims, "prior_h needs n >= 2");
  const Eigen::MatrixXd gram = (op.transpose() * op) / static_cast<double>(k);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(gram);
  const Eigen::MatrixXd& factors = lu.matrixLU();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pivot = std::abs(factors(i, i));
    require(pivot > 1e-300 && std::isfinite(pivot), Errc::RankDeficient,
            "rank-deficient operator in logdet barrier");
    logdet += std::log(pivot);
  }
  const double scale = 1.0 / (static_cast<double>(n) * std::log(static_cast<double>(n)));
  PriorValue result;
  result.value = -scale * logdet;
  result.grad = -(2.0 * scale / static_cast<double>(k)) * (op * lu.inverse());
  return result;
}

PriorValue prior_r(const Eigen::MatrixXd& op) {
  const Eigen::Index k = op.rows();
  const Eigen::MatrixXd gram = op * op.transpose();
  double value = 0.0;
  Eigen::MatrixXd weight = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double ip = gram(i, j);
      require(std::abs(ip) < 1.0 - 1e-12, Errc::CoherentRows,
              "rows " + std::to_string(i) + "," + std::to_string(j) +
                  " are (anti-)parallel");
      const double one_minus = 1.0 - ip * ip;
      value -= std::log(one_minus);
      const double w = 2.0 * ip / one_minus;
      weight(i, j) = w;
      weight(j, i) = w;
    }
  }
  PriorValue result;
  result.value = value;
  result.grad = weight * op;
  return result;
}

namespace {

struct PriorWeights {
  double kappa, mu;
};

// L_c contribution for one operator, value plus (optional) gradient.
double prior_combo(const Eigen::MatrixXd& op, const PriorWeights& w,
                   Eigen::MatrixXd* grad) {
  double value = 0.0;
  if (grad != nullptr) grad->setZero(op.rows(), op.cols());
  if (w.kappa != 0.0) {
    PriorValue h = prior_h(op);
    value += w.kappa * h.value;
    if (grad != nullptr) *grad += w.kappa * h.grad;
  }
  if (w.mu != 0.0) {
    PriorValue r = prior_r(op);
    value += w.mu * r.value;
    if (grad != nullptr) *grad += w.mu * r.grad;
  }
  return value;
}

double objective_core(const MatrixList& ops, const PatchMatrix& intensity,
                      const PatchMatrix& depth, const PatchMatrix& semantics,
                      const LearnConfig& config, MatrixList* grads) {
  BatchOptions options;
  options.operator_grads = grads != nullptr;
  const BatchResult batch =
      batch_cost_and_grads(ops[0], ops[1], ops[2], intensity, depth, semantics,
                           config.weights, options);
  const PriorWeights pw[3] = {{config.kappa_intensity, config.mu_intensity},
                              {config.kappa_depth, config.mu_depth},
                              {config.kappa_semantics, config.mu_semantics}};
  double cost = config.eta * batch.cost;
  if (grads != nullptr) grads->resize(3);
  for (int i = 0; i < 3; ++i) {
    Eigen::MatrixXd prior_grad;
    cost += prior_combo(ops[i], pw[i], grads != nullptr ? &prior_grad : nullptr);
    if (grads != nullptr) {
      const Eigen::MatrixXd* batch_grad =
          i == 0 ? &batch.grad_op_intensity
                 : (i == 1 ? &batch.grad_op_depth : &batch.grad_op_semantics);
      (*grads)[i] = config.eta * (*batch_grad) + prior_grad;
    }
  }
  return cost;
}

MatrixList initial_operators(const LearnConfig& config) {
  const int k = config.resolved_rows();
  MatrixList ops(3);
  ops[0] = random_oblique_point(k, config.intensity_dim(),
                                derive_seed(config.seed, 0));
  ops[1] = random_oblique_point(k, config.depth_dim(),
                                derive_seed(config.seed, 1));
  ops[2] = random_oblique_point(k, config.semantic_dim(),
                                derive_seed(config.seed, 2));
  return ops;
}

OperatorTriple package_operators(MatrixList ops) {
  OperatorTriple triple;
  triple.intensity = {Modality::Intensity, std::move(ops[0])};
  triple.depth = {Modality::Depth, std::move(ops[1])};
  triple.semantics = {Modality::Semantics, std::move(ops[2])};
  triple.intensity.validate();
  triple.depth.validate();
  triple.semantics.validate();
  return triple;
}

PatchMatrix centered_columns(const Eigen::MatrixXd& columns) {
  PatchMatrix patches;
  patches.data = columns;
  patches.means.resize(columns.cols());
  for (Eigen::Index m = 0; m < columns.cols(); ++m) {
    const double mean = patches.data.col(m).mean();
    patches.data.col(m).array() -= mean;
    patches.means(m) = mean;
  }
  return patches;
}

double lr_data_term(const LrTrainingSet& training) {
  const Eigen::ArrayXXd residual =
      (training.depth_estimates - training.observed_values).array() *
      training.observed_mask.array();
  return residual.square().sum() / static_cast<double>(training.count());
}

}  // namespace

double hr_objective(const MatrixList& ops, const HrTrainingSet& training,
                    const LearnConfig& config, MatrixList* grads) {
  require(ops.size() == 3, Errc::InvalidArgument, "expected three operators");
  config.validate();
  training.validate(config);
  return objective_core(ops, training.intensity, training.depth,
                        training.semantics, config, grads);
}

OperatorTriple learn_hr(const HrTrainingSet& training, const LearnConfig& config,
                        std::vector<CgTraceRow>* trace) {
  config.validate();
  training.validate(config);
  auto objective = [&](const MatrixList& ops, MatrixList* grads) {
    return objective_core(ops, training.intensity, training.depth,
                          training.semantics, config, grads);
  };
  MatrixList ops = geometric_cg(objective, initial_operators(config),
                                config.cg, trace);
  return package_operators(std::move(ops));
}

void lr_depth_step(const MatrixList& ops, LrTrainingSet& training,
                   const LearnConfig& config) {
  require(ops.size() == 3, Errc::InvalidArgument, "expected three operators");
  config.validate();
  training.validate(config);

  Eigen::MatrixXd resp_intensity, resp_semantics;
  product_by_columns(ops[0], training.intensity.data, resp_intensity);
  product_by_columns(ops[2], training.semantics.data, resp_semantics);
  const Eigen::MatrixXd& op_depth = ops[1];
  const Eigen::Index k = op_depth.rows();
  const int n = config.depth_dim();

  parallel_for_chunks(training.count(), 8, [&](std::int64_t, std::int64_t begin,
                                               std::int64_t end) {
    Eigen::VectorXd response(k), kernel_grad(k), centered(n);
    for (std::int64_t m = begin; m < end; ++m) {
      const Eigen::VectorXd observed = training.observed_values.col(m);
      const Eigen::VectorXd mask = training.observed_mask.col(m);
      auto objective = [&](const Eigen::VectorXd& depth,
                           Eigen::VectorXd* grad) -> double {
        centered = depth.array() - depth.mean();
        response.noalias() = op_depth * centered;
        double cost = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
          const double ri = resp_intensity(j, m);
          const double rs = resp_semantics(j, m);
          const double rd = response(j);
          const double denom = 1.0 + config.weights.nu_intensity * ri * ri +
                               config.weights.nu_depth * rd * rd +
                               config.weights.nu_semantics * rs * rs;
          cost += std::log(denom);
          kernel_grad(j) = 2.0 * config.weights.nu_depth * rd / denom;
        }
        const Eigen::ArrayXd residual =
            (depth - observed).array() * mask.array();
        cost = config.eta * cost + residual.square().sum();
        if (grad != nullptr) {
          Eigen::VectorXd pull = op_depth.transpose() * kernel_grad;
          pull.array() -= pull.mean();  // adjoint of the centering
          *grad = config.eta * pull + 2.0 * (residual * mask.array()).matrix();
        }
        return cost;
      };
      training.depth_estimates.col(m) =
          euclidean_cg(objective, training.depth_estimates.col(m),
                       config.depth_cg);
    }
  });
}

double lr_total_objective(const MatrixList& ops, const LrTrainingSet& training,
                          const LearnConfig& config) {
  require(ops.size() == 3, Errc::InvalidArgument, "expected three operators");
  const PatchMatrix depth_patches = centered_columns(training.depth_estimates);
  const double sparsity_and_priors =
      objective_core(ops, training.intensity, depth_patches, training.semantics,
                     config, nullptr);
  return sparsity_and_priors + lr_data_term(training);
}

LrLearnResult learn_lr(LrTrainingSet training, const LearnConfig& config,
                       std::vector<CgTraceRow>* operator_trace) {
  config.validate();
  training.validate(config);

  MatrixList ops = initial_operators(config);
  LrLearnResult result;
  result.outer_objectives.push_back(lr_total_objective(ops, training, config));

  for (int round = 0; round < config.lr_outer_iters; ++round) {
    const PatchMatrix depth_patches = centered_columns(training.depth_estimates);
    auto objective = [&](const MatrixList& point, MatrixList* grads) {
      return objective_core(point, training.intensity, depth_patches,
                            training.semantics, config, grads);
    };
    ops = geometric_cg(objective, std::move(ops), config.cg, operator_trace);
    lr_depth_step(ops, training, config);
    result.outer_objectives.push_back(lr_total_objective(ops, training, config));
  }

  result.ops = package_operators(std::move(ops));
  result.depth_estimates = std::move(training.depth_estimates);
  return result;
}

std::vector<std::array<int, 2>> sample_patch_positions(int height, int width,
                                                       int patch_side, int count,
                                                       std::uint64_t seed) {
  require(count >= 1, Errc::InvalidArgument, "count < 1");
  auto all = enumerate_dense_positions(height, width, patch_side);
  if (count >= static_cast<int>(all.size())) return all;
  Rng rng(seed);
  // partial Fisher-Yates
  for (int i = 0; i < count; ++i) {
    const auto j = i + static_cast<int>(rng.below(all.size() - i));
    std::swap(all[i], all[j]);
  }
  all.resize(count);
  return all;
}

HrTrainingSet build_hr_training_set(const ScalarField& intensity,
                                    const ScalarField& depth,
                                    const SemanticField& semantics,
                                    const std::vector<std::array<int, 2>>& positions,
                                    const LearnConfig& config) {
  PatchLayout scalar_layout{config.patch_side, 1, positions};
  PatchLayout semantic_layout{config.patch_side, config.num_classes, positions};
  HrTrainingSet set;
  set.intensity = extract(intensity, scalar_layout);
  set.depth = extract(depth, scalar_layout);
  set.semantics = extract(semantics, semantic_layout);
  set.validate(config);
  return set;
}

LrTrainingSet build_lr_training_set(const ScalarField& intensity,
                                    const ScalarField& observed,
                                    const DownsampleOp& downsample,
                                    const SemanticField& semantics,
                                    const std::vector<std::array<int, 2>>& positions,
                                    const LearnConfig& config) {
  require(observed.has_mask(), Errc::InvalidArgument,
          "low-resolution depth needs an observation mask");
  PatchLayout scalar_layout{config.patch_side, 1, positions};
  PatchLayout semantic_layout{config.patch_side, config.num_classes, positions};

  LrTrainingSet set;
  set.intensity = extract(intensity, scalar_layout);
  set.semantics = extract(semantics, semantic_layout);

  const int side = config.patch_side;
  const int lo = (side - 1) / 2;
  const int n = config.depth_dim();
  const int count = static_cast<int>(positions.size());
  set.observed_values.setZero(n, count);
  set.observed_mask.setZero(n, count);

  const ScalarField initial = interpolate_observations(observed, downsample);
  set.depth_estimates.resize(n, count);
  for (int m = 0; m < count; ++m) {
    const int r0 = positions[m][0] - lo;
    const int c0 = positions[m][1] - lo;
    int idx = 0;
    for (int pr = 0; pr < side; ++pr) {
      for (int pc = 0; pc < side; ++pc, ++idx) {
        const int r = r0 + pr, c = c0 + pc;
        set.depth_estimates(idx, m) = initial.at(r, c);
        if (observed.observed(r, c)) {
          set.observed_values(idx, m) = observed.at(r, c);
          set.observed_mask(idx, m) = 1.0;
        }
      }
    }
  }
  set.validate(config);
  return set;
}

}  // namespace cosparse

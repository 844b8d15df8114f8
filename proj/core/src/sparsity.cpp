#include "cosparse/sparsity.hpp"

#include <cmath>

#include "cosparse/parallel.hpp"

namespace cosparse {

namespace {
constexpr std::int64_t kColumnChunk = 512;
}

void ModalityWeights::validate() const {
  require(nu_intensity >= 0 && nu_depth >= 0 && nu_semantics >= 0,
          Errc::InvalidArgument, "modality weights must be nonnegative");
  require(nu_intensity > 0 || nu_depth > 0 || nu_semantics > 0,
          Errc::InvalidArgument, "at least one modality weight must be positive");
}

double g_cost(const Eigen::VectorXd& resp_intensity,
              const Eigen::VectorXd& resp_depth,
              const Eigen::VectorXd& resp_semantics,
              const ModalityWeights& weights) {
  weights.validate();
  const Eigen::Index k = resp_intensity.size();
  require(resp_depth.size() == k && resp_semantics.size() == k,
          Errc::LengthMismatch, "response lengths differ");
  double cost = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    cost += std::log1p(weights.nu_intensity * resp_intensity(j) * resp_intensity(j) +
                       weights.nu_depth * resp_depth(j) * resp_depth(j) +
                       weights.nu_semantics * resp_semantics(j) * resp_semantics(j));
  }
  return cost;
}

ResponseGrads g_grad_responses(const Eigen::VectorXd& resp_intensity,
                               const Eigen::VectorXd& resp_depth,
                               const Eigen::VectorXd& resp_semantics,
                               const ModalityWeights& weights) {
  weights.validate();
  const Eigen::Index k = resp_intensity.size();
  require(resp_depth.size() == k && resp_semantics.size() == k,
          Errc::LengthMismatch, "response lengths differ");
  ResponseGrads grads;
  grads.intensity.resize(k);
  grads.depth.resize(k);
  grads.semantics.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double denom =
        1.0 + weights.nu_intensity * resp_intensity(j) * resp_intensity(j) +
        weights.nu_depth * resp_depth(j) * resp_depth(j) +
        weights.nu_semantics * resp_semantics(j) * resp_semantics(j);
    grads.intensity(j) = 2.0 * weights.nu_intensity * resp_intensity(j) / denom;
    grads.depth(j) = 2.0 * weights.nu_depth * resp_depth(j) / denom;
    grads.semantics(j) = 2.0 * weights.nu_semantics * resp_semantics(j) / denom;
  }
  return grads;
}

CoSupport co_support(const Eigen::VectorXd& response, double tolerance) {
  require(tolerance >= 0.0, Errc::InvalidArgument, "tolerance < 0");
  CoSupport support;
  support.tolerance = tolerance;
  for (Eigen::Index j = 0; j < response.size(); ++j) {
    if (std::abs(response(j)) <= tolerance) {
      support.indices.push_back(static_cast<int>(j));
    }
  }
  return support;
}

void product_by_columns(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        Eigen::MatrixXd& out) {
  require(a.cols() == b.rows(), Errc::DimMismatch, "product dims");
  out.resize(a.rows(), b.cols());
  parallel_for_chunks(b.cols(), kColumnChunk,
                      [&](std::int64_t, std::int64_t begin, std::int64_t end) {
                        out.middleCols(begin, end - begin).noalias() =
                            a * b.middleCols(begin, end - begin);
                      });
}

void accumulate_outer(const Eigen::MatrixXd& g, const Eigen::MatrixXd& p,
                      Eigen::MatrixXd& out) {
  require(g.cols() == p.cols(), Errc::DimMismatch, "outer accumulation dims");
  const std::int64_t chunks = chunk_count(g.cols(), kColumnChunk);
  std::vector<Eigen::MatrixXd> partial(static_cast<std::size_t>(chunks));
  parallel_for_chunks(g.cols(), kColumnChunk,
                      [&](std::int64_t c, std::int64_t begin, std::int64_t end) {
                        partial[c].noalias() = g.middleCols(begin, end - begin) *
                                               p.middleCols(begin, end - begin).transpose();
                      });
  out = Eigen::MatrixXd::Zero(g.rows(), p.rows());
  for (const auto& block : partial) out += block;
}

double trimodal_response_cost(const Eigen::MatrixXd& resp_intensity,
                              const Eigen::MatrixXd& resp_depth,
                              const Eigen::MatrixXd& resp_semantics,
                              const ModalityWeights& weights,
                              Eigen::MatrixXd* dresp_depth,
                              Eigen::MatrixXd* dresp_semantics,
                              Eigen::MatrixXd* dresp_intensity) {
  weights.validate();
  const Eigen::Index k = resp_intensity.rows();
  const Eigen::Index cols = resp_intensity.cols();
  require(resp_depth.rows() == k && resp_semantics.rows() == k &&
              resp_depth.cols() == cols && resp_semantics.cols() == cols,
          Errc::DimMismatch, "response matrices disagree");
  if (dresp_depth != nullptr) dresp_depth->resize(k, cols);
  if (dresp_semantics != nullptr) dresp_semantics->resize(k, cols);
  if (dresp_intensity != nullptr) dresp_intensity->resize(k, cols);

  const std::int64_t chunks = chunk_count(cols, kColumnChunk);
  std::vector<double> chunk_cost(static_cast<std::size_t>(chunks), 0.0);
  parallel_for_chunks(cols, kColumnChunk,
                      [&](std::int64_t c, std::int64_t begin, std::int64_t end) {
    double local = 0.0;
    for (std::int64_t m = begin; m < end; ++m) {
      for (Eigen::Index j = 0; j < k; ++j) {
        const double ri = resp_intensity(j, m);
        const double rd = resp_depth(j, m);
        const double rs = resp_semantics(j, m);
        const double denom = 1.0 + weights.nu_intensity * ri * ri +
                             weights.nu_depth * rd * rd +
                             weights.nu_semantics * rs * rs;
        local += std::log(denom);
        if (dresp_depth != nullptr) {
          (*dresp_depth)(j, m) = 2.0 * weights.nu_depth * rd / denom;
        }
        if (dresp_semantics != nullptr) {
          (*dresp_semantics)(j, m) = 2.0 * weights.nu_semantics * rs / denom;
        }
        if (dresp_intensity != nullptr) {
          (*dresp_intensity)(j, m) = 2.0 * weights.nu_intensity * ri / denom;
        }
      }
    }
    chunk_cost[c] = local;
  });
  double cost = 0.0;
  for (double c : chunk_cost) cost += c;
  return cost;
}

BatchResult batch_cost_and_grads(const Eigen::MatrixXd& op_intensity,
                                 const Eigen::MatrixXd& op_depth,
                                 const Eigen::MatrixXd& op_semantics,
                                 const PatchMatrix& patches_intensity,
                                 const PatchMatrix& patches_depth,
                                 const PatchMatrix& patches_semantics,
                                 const ModalityWeights& weights,
                                 const BatchOptions& options) {
  const Eigen::Index k = op_intensity.rows();
  require(op_depth.rows() == k && op_semantics.rows() == k, Errc::DimMismatch,
          "operators must share the row count");
  require(op_intensity.cols() == patches_intensity.data.rows(), Errc::DimMismatch,
          "intensity operator vs patch dim");
  require(op_depth.cols() == patches_depth.data.rows(), Errc::DimMismatch,
          "depth operator vs patch dim");
  require(op_semantics.cols() == patches_semantics.data.rows(), Errc::DimMismatch,
          "semantics operator vs patch dim");
  const Eigen::Index count = patches_intensity.data.cols();
  require(patches_depth.data.cols() == count &&
              patches_semantics.data.cols() == count,
          Errc::DimMismatch, "patch counts differ");
  require(count >= 1, Errc::EmptySet, "no patches");

  Eigen::MatrixXd resp_intensity, resp_depth, resp_semantics;
  product_by_columns(op_intensity, patches_intensity.data, resp_intensity);
  product_by_columns(op_depth, patches_depth.data, resp_depth);
  product_by_columns(op_semantics, patches_semantics.data, resp_semantics);

  Eigen::MatrixXd dri, drd, drs;
  const bool need_any = options.operator_grads || options.patch_grads;
  double cost = trimodal_response_cost(
      resp_intensity, resp_depth, resp_semantics, weights,
      need_any ? &drd : nullptr, need_any ? &drs : nullptr,
      options.operator_grads ? &dri : nullptr);

  BatchResult result;
  const double scale = 1.0 / static_cast<double>(count);
  result.cost = cost * scale;
  if (options.operator_grads) {
    accumulate_outer(dri, patches_intensity.data, result.grad_op_intensity);
    accumulate_outer(drd, patches_depth.data, result.grad_op_depth);
    accumulate_outer(drs, patches_semantics.data, result.grad_op_semantics);
    result.grad_op_intensity *= scale;
    result.grad_op_depth *= scale;
    result.grad_op_semantics *= scale;
  }
  if (options.patch_grads) {
    product_by_columns(op_depth.transpose(), drd, result.grad_patch_depth);
    product_by_columns(op_semantics.transpose(), drs, result.grad_patch_semantics);
    result.grad_patch_depth *= scale;
    result.grad_patch_semantics *= scale;
  }
  return result;
}

}  // namespace cosparse

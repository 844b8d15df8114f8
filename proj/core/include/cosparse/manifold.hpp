#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "cosparse/error.hpp"

namespace cosparse {

// Nonlinear conjugate gradient settings. The direction update is
// Polak-Ribiere-plus with restarts; SteepestDescent (beta forced to 0)
// exists to check that the method degrades to plain gradient descent.
struct CgConfig {
  int max_iters = 300;
  double grad_tol = 1e-6;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double initial_step = 1.0;
  enum class BetaRule { PolakRibierePlus, SteepestDescent };
  BetaRule beta_rule = BetaRule::PolakRibierePlus;

  void validate() const;
};

struct CgTraceRow {
  int iter = 0;
  double cost = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  double slope = 0.0;  // directional derivative of the accepted search
};

using MatrixList = std::vector<Eigen::MatrixXd>;

// Objective over a list of matrices. When grads is non-null it must be
// filled with Euclidean gradients of matching shapes. Trial points whose
// evaluation throws a barrier error (RankDeficient, CoherentRows, ZeroRow)
// or returns a non-finite cost are rejected by the line search; a non-finite
// value at the initial or an accepted point is ObjectiveNonFinite.
using ProductObjective =
    std::function<double(const MatrixList& points, MatrixList* euclid_grads)>;

// --- oblique manifold OB(n, k): k rows of unit norm in R^n ---

// Rows sampled from a standard normal and normalized; redrawn until the
// matrix has full column rank.
Eigen::MatrixXd random_oblique_point(int k, int n, std::uint64_t seed);

// Row i of the result is g_i - (g_i . w_i) w_i.
Eigen::MatrixXd project_tangent(const Eigen::MatrixXd& point,
                                const Eigen::MatrixXd& euclid_grad);

// Rows of point + step * tangent renormalized to unit norm.
Eigen::MatrixXd oblique_retract(const Eigen::MatrixXd& point,
                                const Eigen::MatrixXd& tangent, double step);

// Projection transport of a tangent vector to a new point's tangent space.
Eigen::MatrixXd transport(const Eigen::MatrixXd& tangent,
                          const Eigen::MatrixXd& new_point);

// Geometric CG on the product of oblique manifolds (one factor per matrix).
// Returns the final iterate; the optional trace receives one row for the
// initial point (iter 0) plus one per accepted step.
MatrixList geometric_cg(const ProductObjective& objective, MatrixList init,
                        const CgConfig& config,
                        std::vector<CgTraceRow>* trace = nullptr);

using VectorObjective =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

// Same solver over flat Euclidean space.
Eigen::VectorXd euclidean_cg(const VectorObjective& objective,
                             Eigen::VectorXd init, const CgConfig& config,
                             std::vector<CgTraceRow>* trace = nullptr);

}  // namespace cosparse

#include "cosparse/manifold.hpp"

#include <Eigen/QR>
#include <cmath>

#include "cosparse/rng.hpp"

namespace cosparse {

void CgConfig::validate() const {
  require(max_iters >= 0, Errc::InvalidArgument, "max_iters < 0");
  require(grad_tol > 0.0, Errc::InvalidArgument, "grad_tol <= 0");
  require(armijo_c > 0.0 && armijo_c < 1.0, Errc::InvalidArgument,
          "armijo_c outside (0,1)");
  require(backtrack_factor > 0.0 && backtrack_factor < 1.0, Errc::InvalidArgument,
          "backtrack_factor outside (0,1)");
  require(initial_step > 0.0, Errc::InvalidArgument, "initial_step <= 0");
}

Eigen::MatrixXd random_oblique_point(int k, int n, std::uint64_t seed) {
  require(k >= n && n >= 1, Errc::BadDims, "need k >= n >= 1");
  Rng rng(seed);
  Eigen::MatrixXd point(k, n);
  for (;;) {
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < n; ++j) point(i, j) = rng.normal();
    }
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      const double norm = point.row(i).norm();
      if (norm < 1e-12) {
        ok = false;
        break;
      }
      point.row(i) /= norm;
    }
    if (!ok) continue;
    if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(point).rank() == n) {
      return point;
    }
  }
}

Eigen::MatrixXd project_tangent(const Eigen::MatrixXd& point,
                                const Eigen::MatrixXd& euclid_grad) {
  require(point.rows() == euclid_grad.rows() && point.cols() == euclid_grad.cols(),
          Errc::DimMismatch, "tangent projection dims");
  // rowwise: g - (g.w) w
  const Eigen::VectorXd radial = (point.array() * euclid_grad.array()).rowwise().sum();
  return euclid_grad - radial.asDiagonal() * point;
}

Eigen::MatrixXd oblique_retract(const Eigen::MatrixXd& point,
                                const Eigen::MatrixXd& tangent, double step) {
  require(point.rows() == tangent.rows() && point.cols() == tangent.cols(),
          Errc::DimMismatch, "retraction dims");
  Eigen::MatrixXd moved = point + step * tangent;
  for (Eigen::Index i = 0; i < moved.rows(); ++i) {
    const double norm = moved.row(i).norm();
    require(norm >= 1e-14, Errc::ZeroRow,
            "retraction collapsed row " + std::to_string(i));
    moved.row(i) /= norm;
  }
  return moved;
}

Eigen::MatrixXd transport(const Eigen::MatrixXd& tangent,
                          const Eigen::MatrixXd& new_point) {
  return project_tangent(new_point, tangent);
}

namespace {

// Geometry policies shared by the two public solvers.
struct ObliqueGeometry {
  static Eigen::MatrixXd project(const Eigen::MatrixXd& point,
                                 const Eigen::MatrixXd& grad) {
    return project_tangent(point, grad);
  }
  static Eigen::MatrixXd retract(const Eigen::MatrixXd& point,
                                 const Eigen::MatrixXd& dir, double t) {
    return oblique_retract(point, dir, t);
  }
  static Eigen::MatrixXd carry(const Eigen::MatrixXd& tangent,
                               const Eigen::MatrixXd& new_point) {
    return transport(tangent, new_point);
  }
};

struct EuclideanGeometry {
  static Eigen::MatrixXd project(const Eigen::MatrixXd&,
                                 const Eigen::MatrixXd& grad) {
    return grad;
  }
  static Eigen::MatrixXd retract(const Eigen::MatrixXd& point,
                                 const Eigen::MatrixXd& dir, double t) {
    return point + t * dir;
  }
  static Eigen::MatrixXd carry(const Eigen::MatrixXd& tangent,
                               const Eigen::MatrixXd&) {
    return tangent;
  }
};

double inner(const MatrixList& a, const MatrixList& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += (a[i].array() * b[i].array()).sum();
  }
  return sum;
}

bool all_finite(const MatrixList& mats) {
  for (const auto& m : mats) {
    if (!m.allFinite()) return false;
  }
  return true;
}

template <class Geometry>
MatrixList cg_minimize(const ProductObjective& objective, MatrixList point,
                       const CgConfig& config, std::vector<CgTraceRow>* trace) {
  config.validate();
  require(!point.empty(), Errc::InvalidArgument, "empty initial point");

  const std::size_t parts = point.size();
  MatrixList euclid_grads(parts);

  double cost = objective(point, &euclid_grads);
  require(std::isfinite(cost) && all_finite(euclid_grads),
          Errc::ObjectiveNonFinite, "objective not finite at initial point");

  MatrixList grad(parts);
  for (std::size_t i = 0; i < parts; ++i) {
    grad[i] = Geometry::project(point[i], euclid_grads[i]);
  }
  double grad_norm = std::sqrt(inner(grad, grad));
  if (trace != nullptr) trace->push_back({0, cost, grad_norm, 0.0, 0.0});

  MatrixList direction(parts);
  for (std::size_t i = 0; i < parts; ++i) direction[i] = -grad[i];

  double previous_step = config.initial_step;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    if (grad_norm <= config.grad_tol) break;

    double slope = inner(grad, direction);
    if (slope >= 0.0) {
      // not a descent direction; fall back to steepest descent
      for (std::size_t i = 0; i < parts; ++i) direction[i] = -grad[i];
      slope = -grad_norm * grad_norm;
    }

    // backtracking Armijo line search; trials that throw a barrier error or
    // evaluate non-finite are treated as rejected steps
    double step = std::min(config.initial_step,
                           previous_step / config.backtrack_factor);
    MatrixList candidate;
    double candidate_cost = 0.0;
    bool accepted = false;
    while (step >= 1e-16) {
      bool feasible = true;
      try {
        candidate.resize(parts);
        for (std::size_t i = 0; i < parts; ++i) {
          candidate[i] = Geometry::retract(point[i], direction[i], step);
        }
        candidate_cost = objective(candidate, nullptr);
        if (!std::isfinite(candidate_cost)) feasible = false;
      } catch (const Error&) {
        feasible = false;
      }
      if (feasible &&
          candidate_cost <= cost + config.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      step *= config.backtrack_factor;
    }
    require(accepted, Errc::LineSearchStall,
            "no acceptable step above 1e-16 at iteration " +
                std::to_string(iter));

    const double new_cost = objective(candidate, &euclid_grads);
    require(std::isfinite(new_cost) && all_finite(euclid_grads),
            Errc::ObjectiveNonFinite,
            "objective not finite at accepted point");

    MatrixList new_grad(parts);
    for (std::size_t i = 0; i < parts; ++i) {
      new_grad[i] = Geometry::project(candidate[i], euclid_grads[i]);
    }
    const double new_grad_norm = std::sqrt(inner(new_grad, new_grad));

    if (config.beta_rule == CgConfig::BetaRule::SteepestDescent) {
      for (std::size_t i = 0; i < parts; ++i) direction[i] = -new_grad[i];
    } else {
      MatrixList grad_carried(parts), dir_carried(parts);
      for (std::size_t i = 0; i < parts; ++i) {
        grad_carried[i] = Geometry::carry(grad[i], candidate[i]);
        dir_carried[i] = Geometry::carry(direction[i], candidate[i]);
      }
      double beta = 0.0;
      const double denom = grad_norm * grad_norm;
      if (denom > 0.0) {
        double numer = inner(new_grad, new_grad) - inner(new_grad, grad_carried);
        beta = std::max(0.0, numer / denom);
      }
      for (std::size_t i = 0; i < parts; ++i) {
        direction[i] = -new_grad[i] + beta * dir_carried[i];
      }
      // restart on loss of descent
      if (inner(new_grad, direction) >= 0.0) {
        for (std::size_t i = 0; i < parts; ++i) direction[i] = -new_grad[i];
      }
    }

    point = std::move(candidate);
    grad = std::move(new_grad);
    cost = new_cost;
    grad_norm = new_grad_norm;
    previous_step = step;
    if (trace != nullptr) {
      trace->push_back({iter, cost, grad_norm, step, slope});
    }
  }
  return point;
}

}  // namespace

MatrixList geometric_cg(const ProductObjective& objective, MatrixList init,
                        const CgConfig& config, std::vector<CgTraceRow>* trace) {
  return cg_minimize<ObliqueGeometry>(objective, std::move(init), config, trace);
}

Eigen::VectorXd euclidean_cg(const VectorObjective& objective,
                             Eigen::VectorXd init, const CgConfig& config,
                             std::vector<CgTraceRow>* trace) {
  MatrixList wrapped(1);
  wrapped[0] = std::move(init);
  Eigen::VectorXd grad_buffer;
  auto adapter = [&](const MatrixList& points, MatrixList* grads) {
    const Eigen::VectorXd x = points[0];
    if (grads == nullptr) return objective(x, nullptr);
    double cost = objective(x, &grad_buffer);
    (*grads)[0] = grad_buffer;
    return cost;
  };
  MatrixList result =
      cg_minimize<EuclideanGeometry>(adapter, std::move(wrapped), config, trace);
  return result[0];
}

}  // namespace cosparse

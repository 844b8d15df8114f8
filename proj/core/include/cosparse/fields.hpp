#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "cosparse/error.hpp"

namespace cosparse {

enum class Modality { Intensity, Depth, Semantics };

const char* modality_name(Modality m);

// 2-D grid of reals (intensity or depth), row-major. An empty mask means the
// field is dense; otherwise mask[i] == 1 marks an observed pixel.
struct ScalarField {
  int width = 0;
  int height = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  ScalarField() = default;
  ScalarField(int height_, int width_, double fill = 0.0)
      : width(width_),
        height(height_),
        values(static_cast<std::size_t>(width_) * height_, fill) {}

  int size() const { return width * height; }
  bool has_mask() const { return !mask.empty(); }

  double& at(int r, int c) { return values[static_cast<std::size_t>(r) * width + c]; }
  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c]; }

  bool observed(int r, int c) const {
    return mask.empty() || mask[static_cast<std::size_t>(r) * width + c] != 0;
  }

  int observed_count() const;

  // size consistency plus finiteness of every unmasked value
  void validate() const;
};

// Per-pixel class-probability vectors over L classes. Layout is row-major
// over pixels with the class index fastest-varying, matching the patch
// vectorization order.
struct SemanticField {
  int width = 0;
  int height = 0;
  int num_classes = 0;
  std::vector<double> probs;
  bool normalized = false;

  SemanticField() = default;
  SemanticField(int height_, int width_, int num_classes_, double fill = 0.0)
      : width(width_),
        height(height_),
        num_classes(num_classes_),
        probs(static_cast<std::size_t>(width_) * height_ * num_classes_, fill) {}

  int pixels() const { return width * height; }

  double& at(int r, int c, int cls) {
    return probs[(static_cast<std::size_t>(r) * width + c) * num_classes + cls];
  }
  double at(int r, int c, int cls) const {
    return probs[(static_cast<std::size_t>(r) * width + c) * num_classes + cls];
  }

  void validate() const;
};

// k x n analysis operator with unit-norm rows (a point on the transposed
// oblique manifold), tagged by the modality it applies to.
struct AnalysisOperator {
  Modality modality = Modality::Intensity;
  Eigen::MatrixXd entries;

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }

  void validate(double tol = 1e-10) const;
};

}  // namespace cosparse

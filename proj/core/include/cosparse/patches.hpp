#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "cosparse/fields.hpp"

namespace cosparse {

// Patch placement over a grid. Positions are patch centers; only positions
// whose full patch lies inside the grid are admitted (interior-only policy,
// no padding). A patch centered at (r, c) covers rows
// [r - (side-1)/2, r - (side-1)/2 + side), same for columns.
struct PatchLayout {
  int patch_side = 0;
  int channels = 1;  // 1 for intensity/depth, L for semantics
  std::vector<std::array<int, 2>> positions;

  int patch_dim() const { return patch_side * patch_side * channels; }
  int count() const { return static_cast<int>(positions.size()); }
};

// All centers whose patch fits, in row-major order.
std::vector<std::array<int, 2>> enumerate_dense_positions(int height, int width,
                                                          int patch_side);

PatchLayout dense_layout(int height, int width, int patch_side, int channels = 1);

// Column-stack of vectorized, mean-subtracted patches. Vectorization is
// row-major over patch pixels with the channel index fastest; the subtracted
// mean is a single scalar per patch taken over all entries (including all
// semantic channels) and is recorded per column.
struct PatchMatrix {
  Eigen::MatrixXd data;   // n x M, zero-mean columns
  Eigen::VectorXd means;  // M

  int dim() const { return static_cast<int>(data.rows()); }
  int count() const { return static_cast<int>(data.cols()); }
};

PatchMatrix extract(const ScalarField& field, const PatchLayout& layout);
PatchMatrix extract(const SemanticField& field, const PatchLayout& layout);

// Raw-buffer variant used by the reconstruction hot path. `grid` holds
// height*width*channels values, row-major pixels, channel fastest.
void extract_into(const double* grid, int height, int width,
                  const PatchLayout& layout, Eigen::MatrixXd& out,
                  Eigen::VectorXd* means = nullptr);

// Adjoint of extract: accumulates sum_r P_r^T g_r over the grid, with the
// mean-subtraction adjoint applied per column. Output has the grid's layout
// (height*width*channels, channel fastest).
std::vector<double> adjoint_scatter(const Eigen::MatrixXd& patch_grads,
                                    const PatchLayout& layout, int height,
                                    int width);

void adjoint_scatter_into(const Eigen::MatrixXd& patch_grads,
                          const PatchLayout& layout, int height, int width,
                          double* out);

}  // namespace cosparse

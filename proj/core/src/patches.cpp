#include "cosparse/patches.hpp"

#include <cstring>

namespace cosparse {
namespace {

int lead(int patch_side) { return (patch_side - 1) / 2; }

void check_layout(const PatchLayout& layout, int height, int width) {
  require(layout.patch_side >= 1, Errc::InvalidArgument, "patch_side < 1");
  require(layout.channels >= 1, Errc::InvalidArgument, "channels < 1");
  const int lo = lead(layout.patch_side);
  for (const auto& pos : layout.positions) {
    const int r0 = pos[0] - lo;
    const int c0 = pos[1] - lo;
    require(r0 >= 0 && c0 >= 0 && r0 + layout.patch_side <= height &&
                c0 + layout.patch_side <= width,
            Errc::PositionOutOfBounds,
            "patch at (" + std::to_string(pos[0]) + "," + std::to_string(pos[1]) +
                ") does not fit a " + std::to_string(height) + "x" +
                std::to_string(width) + " grid");
  }
}

}  // namespace

std::vector<std::array<int, 2>> enumerate_dense_positions(int height, int width,
                                                          int patch_side) {
  require(patch_side >= 1, Errc::InvalidArgument, "patch_side < 1");
  require(height >= patch_side && width >= patch_side, Errc::GridTooSmall,
          "grid smaller than patch");
  const int lo = lead(patch_side);
  std::vector<std::array<int, 2>> positions;
  positions.reserve(static_cast<std::size_t>(height - patch_side + 1) *
                    (width - patch_side + 1));
  for (int r = lo; r + patch_side - lo <= height; ++r) {
    for (int c = lo; c + patch_side - lo <= width; ++c) {
      positions.push_back({r, c});
    }
  }
  return positions;
}

PatchLayout dense_layout(int height, int width, int patch_side, int channels) {
  PatchLayout layout;
  layout.patch_side = patch_side;
  layout.channels = channels;
  layout.positions = enumerate_dense_positions(height, width, patch_side);
  return layout;
}

void extract_into(const double* grid, int height, int width,
                  const PatchLayout& layout, Eigen::MatrixXd& out,
                  Eigen::VectorXd* means) {
  check_layout(layout, height, width);
  const int n = layout.patch_dim();
  const int count = layout.count();
  const int side = layout.patch_side;
  const int channels = layout.channels;
  const int lo = lead(side);
  out.resize(n, count);
  if (means != nullptr) means->resize(count);
  for (int m = 0; m < count; ++m) {
    const int r0 = layout.positions[m][0] - lo;
    const int c0 = layout.positions[m][1] - lo;
    double* col = out.col(m).data();
    int idx = 0;
    for (int pr = 0; pr < side; ++pr) {
      const double* src =
          grid + (static_cast<std::size_t>(r0 + pr) * width + c0) * channels;
      std::memcpy(col + idx, src, sizeof(double) * side * channels);
      idx += side * channels;
    }
    const double mean = out.col(m).mean();
    out.col(m).array() -= mean;
    if (means != nullptr) (*means)(m) = mean;
  }
}

PatchMatrix extract(const ScalarField& field, const PatchLayout& layout) {
  require(layout.channels == 1, Errc::ChannelMismatch,
          "scalar field needs a single-channel layout");
  PatchMatrix patches;
  extract_into(field.values.data(), field.height, field.width, layout,
               patches.data, &patches.means);
  return patches;
}

PatchMatrix extract(const SemanticField& field, const PatchLayout& layout) {
  require(layout.channels == field.num_classes, Errc::ChannelMismatch,
          "layout channels != semantic classes");
  PatchMatrix patches;
  extract_into(field.probs.data(), field.height, field.width, layout,
               patches.data, &patches.means);
  return patches;
}

void adjoint_scatter_into(const Eigen::MatrixXd& patch_grads,
                          const PatchLayout& layout, int height, int width,
                          double* out) {
  check_layout(layout, height, width);
  require(patch_grads.rows() == layout.patch_dim() &&
              patch_grads.cols() == layout.count(),
          Errc::DimMismatch, "patch gradient dims do not match layout");
  const int side = layout.patch_side;
  const int channels = layout.channels;
  const int n = layout.patch_dim();
  const int lo = lead(side);
  std::memset(out, 0, sizeof(double) * static_cast<std::size_t>(height) * width * channels);
  // fixed column order keeps the accumulation deterministic
  for (int m = 0; m < layout.count(); ++m) {
    const int r0 = layout.positions[m][0] - lo;
    const int c0 = layout.positions[m][1] - lo;
    const double mean = patch_grads.col(m).sum() / n;
    const double* col = patch_grads.col(m).data();
    int idx = 0;
    for (int pr = 0; pr < side; ++pr) {
      double* dst = out + (static_cast<std::size_t>(r0 + pr) * width + c0) * channels;
      for (int j = 0; j < side * channels; ++j) dst[j] += col[idx + j] - mean;
      idx += side * channels;
    }
  }
}

std::vector<double> adjoint_scatter(const Eigen::MatrixXd& patch_grads,
                                    const PatchLayout& layout, int height,
                                    int width) {
  std::vector<double> grid(static_cast<std::size_t>(height) * width * layout.channels);
  adjoint_scatter_into(patch_grads, layout, height, width, grid.data());
  return grid;
}

}  // namespace cosparse

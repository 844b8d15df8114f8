#include "cosparse/downsample.hpp"

#include <cmath>

namespace cosparse {

DownsampleOp DownsampleOp::grid(int factor) {
  require(factor >= 1, Errc::BadSpec, "subsample factor < 1");
  DownsampleOp op;
  op.mode = Mode::GridSubsample;
  op.factor = factor;
  return op;
}

DownsampleOp DownsampleOp::from_mask(int height, int width,
                                     std::vector<std::uint8_t> mask) {
  require(mask.size() == static_cast<std::size_t>(height) * width,
          Errc::DimMismatch, "mask length != height*width");
  DownsampleOp op;
  op.mode = Mode::ExplicitMask;
  op.mask_height = height;
  op.mask_width = width;
  op.mask = std::move(mask);
  return op;
}

std::vector<std::uint8_t> DownsampleOp::sample_mask(int height, int width) const {
  if (mode == Mode::ExplicitMask) {
    require(mask_height == height && mask_width == width, Errc::DimMismatch,
            "mask dims do not match grid");
    return mask;
  }
  std::vector<std::uint8_t> out(static_cast<std::size_t>(height) * width, 0);
  for (int r = 0; r < height; r += factor) {
    for (int c = 0; c < width; c += factor) {
      out[static_cast<std::size_t>(r) * width + c] = 1;
    }
  }
  return out;
}

int DownsampleOp::sample_count(int height, int width) const {
  if (mode == Mode::ExplicitMask) {
    int n = 0;
    for (auto v : mask) n += v != 0;
    return n;
  }
  const int rows = (height + factor - 1) / factor;
  const int cols = (width + factor - 1) / factor;
  return rows * cols;
}

std::optional<int> detect_grid_factor(const std::vector<std::uint8_t>& mask,
                                      int height, int width) {
  for (int d = 1; d <= std::max(height, width); ++d) {
    bool match = true;
    for (int r = 0; r < height && match; ++r) {
      for (int c = 0; c < width && match; ++c) {
        const bool expect = (r % d == 0) && (c % d == 0);
        if ((mask[static_cast<std::size_t>(r) * width + c] != 0) != expect) {
          match = false;
        }
      }
    }
    if (match) return d;
  }
  return std::nullopt;
}

namespace {

ScalarField bilinear_from_grid(const ScalarField& observed, int factor) {
  const int height = observed.height, width = observed.width;
  const int coarse_h = (height + factor - 1) / factor;
  const int coarse_w = (width + factor - 1) / factor;
  ScalarField dense(height, width);
  for (int r = 0; r < height; ++r) {
    const double y = static_cast<double>(r) / factor;
    int i0 = static_cast<int>(std::floor(y));
    i0 = std::min(i0, coarse_h - 1);
    const int i1 = std::min(i0 + 1, coarse_h - 1);
    const double fy = std::min(1.0, y - i0);
    for (int c = 0; c < width; ++c) {
      const double x = static_cast<double>(c) / factor;
      int j0 = static_cast<int>(std::floor(x));
      j0 = std::min(j0, coarse_w - 1);
      const int j1 = std::min(j0 + 1, coarse_w - 1);
      const double fx = std::min(1.0, x - j0);
      const double v00 = observed.at(i0 * factor, j0 * factor);
      const double v01 = observed.at(i0 * factor, j1 * factor);
      const double v10 = observed.at(i1 * factor, j0 * factor);
      const double v11 = observed.at(i1 * factor, j1 * factor);
      dense.at(r, c) = (1 - fy) * ((1 - fx) * v00 + fx * v01) +
                       fy * ((1 - fx) * v10 + fx * v11);
    }
  }
  return dense;
}

ScalarField idw_from_mask(const ScalarField& observed) {
  const int height = observed.height, width = observed.width;
  std::vector<std::array<double, 3>> samples;  // (r, c, value)
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (observed.observed(r, c)) {
        samples.push_back({static_cast<double>(r), static_cast<double>(c),
                           observed.at(r, c)});
      }
    }
  }
  require(!samples.empty(), Errc::NoObservations, "mask has no observations");
  ScalarField dense(height, width);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (observed.observed(r, c)) {
        dense.at(r, c) = observed.at(r, c);
        continue;
      }
      double weight_sum = 0.0, value_sum = 0.0;
      for (const auto& s : samples) {
        const double dr = s[0] - r, dc = s[1] - c;
        const double w = 1.0 / (dr * dr + dc * dc);
        weight_sum += w;
        value_sum += w * s[2];
      }
      dense.at(r, c) = value_sum / weight_sum;
    }
  }
  return dense;
}

}  // namespace

ScalarField interpolate_observations(const ScalarField& observed,
                                     const DownsampleOp& op) {
  observed.validate();
  require(observed.observed_count() >= 1, Errc::NoObservations,
          "no observed pixels");
  if (op.mode == DownsampleOp::Mode::GridSubsample) {
    return bilinear_from_grid(observed, op.factor);
  }
  return idw_from_mask(observed);
}

}  // namespace cosparse

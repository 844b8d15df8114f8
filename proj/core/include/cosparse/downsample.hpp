#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cosparse/fields.hpp"

namespace cosparse {

// Linear measurement operator mapping a dense grid to sparse observations:
// either subsampling at pixels (d*i, d*j) or point sampling at an explicit
// mask.
struct DownsampleOp {
  enum class Mode { GridSubsample, ExplicitMask };

  Mode mode = Mode::GridSubsample;
  int factor = 1;
  int mask_height = 0, mask_width = 0;
  std::vector<std::uint8_t> mask;

  static DownsampleOp grid(int factor);
  static DownsampleOp from_mask(int height, int width,
                                std::vector<std::uint8_t> mask);

  std::vector<std::uint8_t> sample_mask(int height, int width) const;
  int sample_count(int height, int width) const;
};

// Infer a grid-subsample factor from an observation mask, if it matches the
// (d*i, d*j) pattern exactly.
std::optional<int> detect_grid_factor(const std::vector<std::uint8_t>& mask,
                                      int height, int width);

// Dense estimate from sparse observations. Grid observations use separable
// bilinear interpolation between samples (clamped beyond the last sample);
// irregular masks fall back to inverse-distance weighting. Observed pixels
// keep their values exactly.
ScalarField interpolate_observations(const ScalarField& observed,
                                     const DownsampleOp& op);

}  // namespace cosparse

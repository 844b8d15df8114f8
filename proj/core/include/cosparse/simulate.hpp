#pragma once

#include <cstdint>

#include "cosparse/downsample.hpp"
#include "cosparse/fields.hpp"

namespace cosparse {

// Synthetic outdoor-style scene: a Voronoi partition with per-region depth
// and one-hot semantics, plus intensity whose edges are deliberately NOT
// aligned with depth (multiplicative shadow bands).
struct SceneSpec {
  int width = 64;
  int height = 64;
  int num_regions = 5;
  int num_classes = 3;
  int shadow_bands = 2;
  double depth_min = 1.0;
  double depth_max = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Scene {
  ScalarField intensity;
  ScalarField depth;
  SemanticField semantics;
};

// Deterministic per seed. Depth and semantic boundaries coincide by
// construction (adjacent regions get distinct classes whenever num_classes
// allows a proper coloring); shadow bands add intensity edges that have no
// depth counterpart.
Scene gen_scene(const SceneSpec& spec);

// observed = depth at sampled positions (+ optional Gaussian noise), with the
// mask set exactly at the samples.
ScalarField apply_downsample(const ScalarField& depth, const DownsampleOp& op,
                             double noise_sigma = 0.0, std::uint64_t seed = 0);

// Per pixel: with probability flip_rate swap the true class for a uniformly
// random wrong one, then blend the one-hot vector with uniform by softness.
SemanticField corrupt_semantics(const SemanticField& gt, double flip_rate,
                                double softness, std::uint64_t seed);

// Interpolation baselines for grid-subsampled observations.
ScalarField baseline_nearest(const ScalarField& observed, const DownsampleOp& op);
// Catmull-Rom bicubic (a = -0.5) with linear extrapolation at the borders,
// so affine ramps are reproduced exactly everywhere.
ScalarField baseline_bicubic(const ScalarField& observed, const DownsampleOp& op);

}  // namespace cosparse

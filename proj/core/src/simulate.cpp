#include "cosparse/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "cosparse/rng.hpp"
#include "cosparse/superres.hpp"

namespace cosparse {

void SceneSpec::validate() const {
  require(width >= 1 && height >= 1, Errc::BadSpec, "empty grid");
  require(num_regions >= 1, Errc::BadSpec, "num_regions < 1");
  require(num_classes >= 1, Errc::BadSpec, "num_classes < 1");
  require(shadow_bands >= 0, Errc::BadSpec, "shadow_bands < 0");
  require(depth_max >= depth_min, Errc::BadSpec, "depth range inverted");
}

namespace {

constexpr double kShadowFactor = 0.5;
constexpr double kIntensityNoise = 0.002;

struct Partition {
  std::vector<int> region;  // per pixel
  std::vector<std::array<double, 2>> sites;
  std::vector<std::set<int>> adjacency;
};

Partition make_partition(const SceneSpec& spec, Rng& rng) {
  Partition part;
  part.sites.resize(spec.num_regions);
  for (auto& site : part.sites) {
    site = {rng.uniform(0.0, spec.height), rng.uniform(0.0, spec.width)};
  }
  part.region.resize(static_cast<std::size_t>(spec.width) * spec.height);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      int best = 0;
      double best_dist = std::numeric_limits<double>::max();
      for (int s = 0; s < spec.num_regions; ++s) {
        const double dr = part.sites[s][0] - r;
        const double dc = part.sites[s][1] - c;
        const double dist = dr * dr + dc * dc;
        if (dist < best_dist) {
          best_dist = dist;
          best = s;
        }
      }
      part.region[static_cast<std::size_t>(r) * spec.width + c] = best;
    }
  }
  part.adjacency.resize(spec.num_regions);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      const int here = part.region[static_cast<std::size_t>(r) * spec.width + c];
      if (c + 1 < spec.width) {
        const int right = part.region[static_cast<std::size_t>(r) * spec.width + c + 1];
        if (right != here) {
          part.adjacency[here].insert(right);
          part.adjacency[right].insert(here);
        }
      }
      if (r + 1 < spec.height) {
        const int below = part.region[(static_cast<std::size_t>(r) + 1) * spec.width + c];
        if (below != here) {
          part.adjacency[here].insert(below);
          part.adjacency[below].insert(here);
        }
      }
    }
  }
  return part;
}

// Greedy proper coloring with num_classes colors; empty result on failure.
std::vector<int> color_regions(const Partition& part, int num_classes) {
  const int regions = static_cast<int>(part.sites.size());
  if (num_classes >= regions) {
    std::vector<int> colors(regions);
    for (int i = 0; i < regions; ++i) colors[i] = i;
    return colors;
  }
  std::vector<int> colors(regions, -1);
  for (int i = 0; i < regions; ++i) {
    std::vector<bool> used(num_classes, false);
    for (int neighbor : part.adjacency[i]) {
      if (colors[neighbor] >= 0) used[colors[neighbor]] = true;
    }
    int pick = -1;
    for (int c = 0; c < num_classes; ++c) {
      if (!used[c]) {
        pick = c;
        break;
      }
    }
    if (pick < 0) return {};
    colors[i] = pick;
  }
  return colors;
}

// Draw per-region levels until every adjacent pair is separated, including
// under the shadow factor (so region edges survive in intensity no matter
// which side a band covers). Returns the best draw if the margin is never
// met; seeds used by the synthetic suite all satisfy it.
std::vector<double> separated_levels(const Partition& part, Rng& rng, double lo,
                                     double hi, double margin,
                                     bool shadow_combinations) {
  const int regions = static_cast<int>(part.sites.size());
  std::vector<double> best(regions, lo);
  double best_sep = -1.0;
  for (int attempt = 0; attempt < 500; ++attempt) {
    std::vector<double> levels(regions);
    for (auto& v : levels) v = rng.uniform(lo, hi);
    double sep = std::numeric_limits<double>::max();
    for (int i = 0; i < regions; ++i) {
      for (int j : part.adjacency[i]) {
        if (j <= i) continue;
        double pair_sep = std::abs(levels[i] - levels[j]);
        if (shadow_combinations) {
          pair_sep = std::min({pair_sep,
                               std::abs(levels[i] * kShadowFactor - levels[j]),
                               std::abs(levels[i] - levels[j] * kShadowFactor),
                               std::abs(levels[i] - levels[j]) * kShadowFactor *
                                   kShadowFactor});
        }
        sep = std::min(sep, pair_sep);
      }
    }
    if (regions == 1) sep = margin;
    if (sep > best_sep) {
      best_sep = sep;
      best = levels;
    }
    if (best_sep >= margin) break;
  }
  return best;
}

}  // namespace

Scene gen_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, 100));

  Partition part = make_partition(spec, rng);
  std::vector<int> colors = color_regions(part, spec.num_classes);
  for (int attempt = 0; attempt < 20 && colors.empty(); ++attempt) {
    part = make_partition(spec, rng);  // resample the layout and retry
    colors = color_regions(part, spec.num_classes);
  }
  if (colors.empty()) {
    colors.resize(spec.num_regions);
    for (int i = 0; i < spec.num_regions; ++i) colors[i] = i % spec.num_classes;
  }

  const double range = std::max(spec.depth_max - spec.depth_min, 1e-12);
  const double diag = std::hypot(spec.width, spec.height);

  // depth: separated per-region bases plus a mild per-region ramp
  std::vector<double> depth_base =
      separated_levels(part, rng, spec.depth_min + 0.1 * range,
                       spec.depth_max - 0.1 * range, 0.1 * range, false);
  std::vector<std::array<double, 2>> slope(spec.num_regions, {0.0, 0.0});
  for (int s = 1; s < spec.num_regions; ++s) {
    const double angle = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    const double magnitude = 0.02 * range / diag;
    slope[s] = {magnitude * std::sin(angle), magnitude * std::cos(angle)};
  }

  // intensity: separated base levels, then shadow bands and faint noise
  std::vector<double> intensity_base =
      separated_levels(part, rng, 0.3, 0.95, 0.08, true);
  std::vector<std::array<double, 4>> bands;  // (r, c, normal_r, normal_c, halfwidth)
  std::vector<double> band_halfwidth;
  for (int b = 0; b < spec.shadow_bands; ++b) {
    const double cr = rng.uniform(0.2 * spec.height, 0.8 * spec.height);
    const double cc = rng.uniform(0.2 * spec.width, 0.8 * spec.width);
    const double angle = rng.uniform(0.0, 3.14159265358979323846);
    bands.push_back({cr, cc, std::sin(angle), std::cos(angle)});
    band_halfwidth.push_back(
        rng.uniform(2.5, std::max(3.5, std::min(spec.width, spec.height) / 8.0)));
  }

  Scene scene;
  scene.depth = ScalarField(spec.height, spec.width);
  scene.intensity = ScalarField(spec.height, spec.width);
  scene.semantics = SemanticField(spec.height, spec.width, spec.num_classes);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      const int region = part.region[static_cast<std::size_t>(r) * spec.width + c];
      double depth = depth_base[region] +
                     slope[region][0] * (r - part.sites[region][0]) +
                     slope[region][1] * (c - part.sites[region][1]);
      depth = std::min(spec.depth_max, std::max(spec.depth_min, depth));
      scene.depth.at(r, c) = depth;

      double level = intensity_base[region];
      for (std::size_t b = 0; b < bands.size(); ++b) {
        const double dist = (r - bands[b][0]) * bands[b][2] +
                            (c - bands[b][1]) * bands[b][3];
        if (std::abs(dist) <= band_halfwidth[b]) level *= kShadowFactor;
      }
      level += rng.uniform(-kIntensityNoise, kIntensityNoise);
      scene.intensity.at(r, c) = std::min(1.0, std::max(0.0, level));

      scene.semantics.at(r, c, colors[region]) = 1.0;
    }
  }
  scene.semantics.normalized = true;
  return scene;
}

ScalarField apply_downsample(const ScalarField& depth, const DownsampleOp& op,
                             double noise_sigma, std::uint64_t seed) {
  depth.validate();
  require(!depth.has_mask(), Errc::InvalidArgument,
          "downsampling expects a dense depth field");
  require(noise_sigma >= 0.0, Errc::InvalidArgument, "noise_sigma < 0");
  ScalarField observed(depth.height, depth.width);
  observed.mask = op.sample_mask(depth.height, depth.width);
  int samples = 0;
  Rng rng(derive_seed(seed, 200));
  for (int i = 0; i < depth.size(); ++i) {
    if (observed.mask[i] == 0) continue;
    double value = depth.values[i];
    if (noise_sigma > 0.0) value += noise_sigma * rng.normal();
    observed.values[i] = value;
    ++samples;
  }
  require(samples >= 1, Errc::FactorTooLarge, "no samples fit the grid");
  return observed;
}

SemanticField corrupt_semantics(const SemanticField& gt, double flip_rate,
                                double softness, std::uint64_t seed) {
  gt.validate();
  require(flip_rate >= 0.0 && flip_rate <= 1.0, Errc::BadRate,
          "flip_rate outside [0,1]");
  require(softness >= 0.0 && softness <= 1.0, Errc::BadRate,
          "softness outside [0,1]");
  const int classes = gt.num_classes;
  const std::vector<int> labels = hard_labels(gt);
  SemanticField noisy(gt.height, gt.width, classes);
  Rng rng(derive_seed(seed, 300));
  for (int p = 0; p < gt.pixels(); ++p) {
    int label = labels[p];
    if (classes > 1 && rng.uniform01() < flip_rate) {
      const int wrong = static_cast<int>(rng.below(classes - 1));
      label = wrong >= label ? wrong + 1 : wrong;
    }
    for (int c = 0; c < classes; ++c) {
      noisy.probs[static_cast<std::size_t>(p) * classes + c] =
          (c == label ? 1.0 - softness : 0.0) + softness / classes;
    }
  }
  noisy.normalized = true;
  return noisy;
}

namespace {

int grid_factor_or_throw(const ScalarField& observed, const DownsampleOp& op) {
  require(op.mode == DownsampleOp::Mode::GridSubsample, Errc::NotGridObservations,
          "baseline interpolation needs grid-subsampled observations");
  require(observed.has_mask(), Errc::NotGridObservations,
          "observations carry no mask");
  for (int r = 0; r < observed.height; ++r) {
    for (int c = 0; c < observed.width; ++c) {
      const bool expect = (r % op.factor == 0) && (c % op.factor == 0);
      require(observed.observed(r, c) == expect, Errc::NotGridObservations,
              "mask does not match the subsampling grid");
    }
  }
  return op.factor;
}

// Catmull-Rom weights for fractional offset u in [0,1)
void catmull_rom(double u, double w[4]) {
  const double u2 = u * u, u3 = u2 * u;
  w[0] = 0.5 * (-u3 + 2.0 * u2 - u);
  w[1] = 0.5 * (3.0 * u3 - 5.0 * u2 + 2.0);
  w[2] = 0.5 * (-3.0 * u3 + 4.0 * u2 + u);
  w[3] = 0.5 * (u3 - u2);
}

}  // namespace

ScalarField baseline_nearest(const ScalarField& observed, const DownsampleOp& op) {
  const int d = grid_factor_or_throw(observed, op);
  const int coarse_h = (observed.height + d - 1) / d;
  const int coarse_w = (observed.width + d - 1) / d;
  ScalarField out(observed.height, observed.width);
  for (int r = 0; r < observed.height; ++r) {
    const int i = std::min(coarse_h - 1,
                           static_cast<int>(std::floor(static_cast<double>(r) / d + 0.5)));
    for (int c = 0; c < observed.width; ++c) {
      const int j = std::min(coarse_w - 1,
                             static_cast<int>(std::floor(static_cast<double>(c) / d + 0.5)));
      out.at(r, c) = observed.at(i * d, j * d);
    }
  }
  return out;
}

ScalarField baseline_bicubic(const ScalarField& observed, const DownsampleOp& op) {
  const int d = grid_factor_or_throw(observed, op);
  const int coarse_h = (observed.height + d - 1) / d;
  const int coarse_w = (observed.width + d - 1) / d;

  // coarse samples with linear extrapolation outside the grid
  auto sample = [&](int i, int j) -> double {
    auto axis = [](int idx, int count) -> std::pair<int, double> {
      // returns (clamped index, extrapolation steps beyond it)
      if (idx < 0) return {0, static_cast<double>(idx)};
      if (idx >= count) return {count - 1, static_cast<double>(idx - (count - 1))};
      return {idx, 0.0};
    };
    const auto [ci, ei] = axis(i, coarse_h);
    const auto [cj, ej] = axis(j, coarse_w);
    double value = observed.at(ci * d, cj * d);
    if (ei != 0.0 && coarse_h >= 2) {
      const int step = ci == 0 ? 1 : -1;
      const double delta = observed.at(ci * d, cj * d) -
                           observed.at((ci + step) * d, cj * d);
      value += std::abs(ei) * delta;
    }
    if (ej != 0.0 && coarse_w >= 2) {
      const int step = cj == 0 ? 1 : -1;
      const double delta = observed.at(ci * d, cj * d) -
                           observed.at(ci * d, (cj + step) * d);
      value += std::abs(ej) * delta;
    }
    return value;
  };

  ScalarField out(observed.height, observed.width);
  for (int r = 0; r < observed.height; ++r) {
    const double y = static_cast<double>(r) / d;
    const int i0 = static_cast<int>(std::floor(y));
    double wy[4];
    catmull_rom(y - i0, wy);
    for (int c = 0; c < observed.width; ++c) {
      const double x = static_cast<double>(c) / d;
      const int j0 = static_cast<int>(std::floor(x));
      double wx[4];
      catmull_rom(x - j0, wx);
      double value = 0.0;
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          value += wy[a] * wx[b] * sample(i0 - 1 + a, j0 - 1 + b);
        }
      }
      out.at(r, c) = value;
    }
  }
  return out;
}

}  // namespace cosparse

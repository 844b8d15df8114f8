#pragma once

#include <cstdint>
#include <vector>

#include "cosparse/fields.hpp"

namespace cosparse {

// Root-mean-square error over valid pixels. The mask overload restricts the
// mean to pixels with valid[i] != 0.
double rmse(const ScalarField& pred, const ScalarField& gt);
double rmse(const ScalarField& pred, const ScalarField& gt,
            const std::vector<std::uint8_t>& valid);

struct LabelAccuracy {
  double per_pixel = 0.0;
  double per_class = 0.0;  // macro recall over classes present in gt
  std::vector<std::int64_t> class_pixel_counts;
};

LabelAccuracy label_accuracy(const SemanticField& pred, const SemanticField& gt);

// (baseline - ours) / baseline
double relative_improvement(double ours_rmse, double baseline_rmse);

struct MetricsReport {
  double rmse_value = 0.0;
  bool has_labels = false;
  double per_pixel_accuracy = 0.0;
  double per_class_accuracy = 0.0;
  bool has_relative_improvement = false;
  double relative_improvement_value = 0.0;
};

std::vector<std::string> metrics_csv_header();
std::vector<std::string> metrics_csv_row(const std::string& name,
                                         const MetricsReport& report);

}  // namespace cosparse

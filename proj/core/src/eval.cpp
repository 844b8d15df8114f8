#include "cosparse/eval.hpp"

#include <cmath>
#include <string>

#include "cosparse/csv.hpp"
#include "cosparse/superres.hpp"

namespace cosparse {

double rmse(const ScalarField& pred, const ScalarField& gt,
            const std::vector<std::uint8_t>& valid) {
  require(pred.width == gt.width && pred.height == gt.height, Errc::DimMismatch,
          "rmse field dims differ");
  require(valid.empty() || valid.size() == static_cast<std::size_t>(gt.size()),
          Errc::DimMismatch, "rmse mask length");
  double sum = 0.0;
  std::int64_t count = 0;
  for (int i = 0; i < gt.size(); ++i) {
    if (!valid.empty() && valid[i] == 0) continue;
    const double diff = pred.values[i] - gt.values[i];
    sum += diff * diff;
    ++count;
  }
  require(count >= 1, Errc::EmptyMask, "no valid pixels");
  return std::sqrt(sum / static_cast<double>(count));
}

double rmse(const ScalarField& pred, const ScalarField& gt) {
  return rmse(pred, gt, {});
}

LabelAccuracy label_accuracy(const SemanticField& pred, const SemanticField& gt) {
  require(pred.width == gt.width && pred.height == gt.height &&
              pred.num_classes == gt.num_classes,
          Errc::DimMismatch, "label fields disagree");
  require(gt.pixels() >= 1, Errc::EmptyMask, "empty fields");
  const std::vector<int> pred_labels = hard_labels(pred);
  const std::vector<int> gt_labels = hard_labels(gt);

  LabelAccuracy accuracy;
  accuracy.class_pixel_counts.assign(gt.num_classes, 0);
  std::vector<std::int64_t> correct_per_class(gt.num_classes, 0);
  std::int64_t correct = 0;
  for (int p = 0; p < gt.pixels(); ++p) {
    ++accuracy.class_pixel_counts[gt_labels[p]];
    if (pred_labels[p] == gt_labels[p]) {
      ++correct;
      ++correct_per_class[gt_labels[p]];
    }
  }
  accuracy.per_pixel = static_cast<double>(correct) / gt.pixels();
  double recall_sum = 0.0;
  int present = 0;
  for (int c = 0; c < gt.num_classes; ++c) {
    if (accuracy.class_pixel_counts[c] == 0) continue;  // absent from gt
    recall_sum += static_cast<double>(correct_per_class[c]) /
                  static_cast<double>(accuracy.class_pixel_counts[c]);
    ++present;
  }
  accuracy.per_class = present > 0 ? recall_sum / present : 0.0;
  return accuracy;
}

double relative_improvement(double ours_rmse, double baseline_rmse) {
  require(baseline_rmse > 0.0, Errc::ZeroBaseline, "baseline rmse must be > 0");
  return (baseline_rmse - ours_rmse) / baseline_rmse;
}

std::vector<std::string> metrics_csv_header() {
  return {"name", "rmse", "per_pixel_acc", "per_class_acc", "relative_improvement"};
}

std::vector<std::string> metrics_csv_row(const std::string& name,
                                         const MetricsReport& report) {
  std::vector<std::string> row(5);
  row[0] = name;
  row[1] = format_double(report.rmse_value);
  row[2] = report.has_labels ? format_double(report.per_pixel_accuracy) : "";
  row[3] = report.has_labels ? format_double(report.per_class_accuracy) : "";
  row[4] = report.has_relative_improvement
               ? format_double(report.relative_improvement_value)
               : "";
  return row;
}

}  // namespace cosparse

#include "cosparse/fields.hpp"

#include <cmath>

namespace cosparse {

const char* modality_name(Modality m) {
  switch (m) {
    case Modality::Intensity: return "intensity";
    case Modality::Depth: return "depth";
    case Modality::Semantics: return "semantics";
  }
  return "?";
}

int ScalarField::observed_count() const {
  if (mask.empty()) return size();
  int n = 0;
  for (auto v : mask) n += v != 0;
  return n;
}

void ScalarField::validate() const {
  require(width >= 0 && height >= 0, Errc::InvalidArgument, "negative field dims");
  require(values.size() == static_cast<std::size_t>(size()), Errc::DimMismatch,
          "values length != width*height");
  require(mask.empty() || mask.size() == values.size(), Errc::DimMismatch,
          "mask length != width*height");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mask.empty() && mask[i] == 0) continue;
    require(std::isfinite(values[i]), Errc::InvalidArgument,
            "non-finite field value");
  }
}

void SemanticField::validate() const {
  require(width >= 0 && height >= 0 && num_classes >= 1, Errc::InvalidArgument,
          "bad semantic dims");
  require(probs.size() == static_cast<std::size_t>(pixels()) * num_classes,
          Errc::DimMismatch, "probs length != pixels*classes");
  for (double p : probs) {
    require(std::isfinite(p) && p >= 0.0, Errc::InvalidArgument,
            "semantic probabilities must be finite and nonnegative");
    if (normalized) {
      require(p <= 1.0 + 1e-9, Errc::InvalidArgument,
              "normalized probabilities must lie in [0,1]");
    }
  }
  if (normalized) {
    for (int p = 0; p < pixels(); ++p) {
      double sum = 0.0;
      for (int c = 0; c < num_classes; ++c) {
        sum += probs[static_cast<std::size_t>(p) * num_classes + c];
      }
      require(std::abs(sum - 1.0) <= 1e-6, Errc::InvalidArgument,
              "per-pixel probability sum must be 1 for normalized fields");
    }
  }
}

void AnalysisOperator::validate(double tol) const {
  require(entries.rows() >= 1 && entries.cols() >= 1, Errc::BadDims,
          "empty operator");
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    double norm = entries.row(i).norm();
    require(std::abs(norm - 1.0) <= tol, Errc::InvalidArgument,
            "operator row " + std::to_string(i) + " is not unit norm");
  }
}

}  // namespace cosparse

#pragma once

#include "msreg/matrix.hpp"

namespace msreg {

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;
};

// Per-feature min/max learned on training rows only (fitting on the whole
// dataset before splitting leaks the test range; the caller chooses).
struct NormalizationParams {
  std::vector<FeatureRange> ranges;
};

NormalizationParams fit_normalization(const Matrix& features);

// x' = -1 + 2 (x - min) / (max - min), mapping the training range onto
// [-1, 1]. A constant feature maps to 0. Test values outside the training
// range are NOT clipped; they land outside [-1, 1], which keeps distances
// honest for k-means routing.
Matrix apply_normalization(const NormalizationParams& params, const Matrix& features);

}  // namespace msreg

#include "msreg/normalization.hpp"

#include <stdexcept>

namespace msreg {

NormalizationParams fit_normalization(const Matrix& features) {
  if (features.rows() == 0)
    throw std::invalid_argument("fit_normalization: no rows");
  NormalizationParams params;
  params.ranges.resize(features.cols());
  for (std::size_t c = 0; c < features.cols(); ++c) {
    double lo = features(0, c), hi = features(0, c);
    for (std::size_t r = 1; r < features.rows(); ++r) {
      const double v = features(r, c);
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    params.ranges[c] = {lo, hi};
  }
  return params;
}

Matrix apply_normalization(const NormalizationParams& params, const Matrix& features) {
  if (params.ranges.size() != features.cols())
    throw std::invalid_argument("apply_normalization: feature count mismatch");
  Matrix out(features.rows(), features.cols());
  for (std::size_t c = 0; c < features.cols(); ++c) {
    const auto [lo, hi] = params.ranges[c];
    const double span = hi - lo;
    for (std::size_t r = 0; r < features.rows(); ++r)
      out(r, c) = span == 0.0 ? 0.0 : -1.0 + 2.0 * (features(r, c) - lo) / span;
  }
  return out;
}

}  // namespace msreg

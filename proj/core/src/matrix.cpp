#include "msreg/matrix.hpp"

#include <stdexcept>

namespace msreg {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m;
  m.rows_ = rows.size();
  m.cols_ = rows.size() ? rows.begin()->size() : 0;
  m.data_.reserve(m.rows_ * m.cols_);
  for (const auto& row : rows) {
    if (row.size() != m.cols_)
      throw std::invalid_argument("Matrix::from_rows: ragged rows");
    m.data_.insert(m.data_.end(), row.begin(), row.end());
  }
  return m;
}

Matrix Matrix::select_rows(std::span<const int> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t r = static_cast<std::size_t>(indices[i]);
    if (r >= rows_) throw std::out_of_range("Matrix::select_rows: bad index");
    const double* src = data_.data() + r * cols_;
    double* dst = out.data() + i * cols_;
    for (std::size_t c = 0; c < cols_; ++c) dst[c] = src[c];
  }
  return out;
}

std::vector<double> Matrix::column(std::size_t c) const {
  if (c >= cols_) throw std::out_of_range("Matrix::column: bad index");
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
  return out;
}

Vector select(const Vector& values, std::span<const int> indices) {
  Vector out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t r = static_cast<std::size_t>(indices[i]);
    if (r >= values.size()) throw std::out_of_range("select: bad index");
    out[i] = values[r];
  }
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean: empty input");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
  const double m = mean(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return s / static_cast<double>(values.size());
}

}  // namespace msreg

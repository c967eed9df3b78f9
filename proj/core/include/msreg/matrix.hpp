#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace msreg {

// Dense row-major matrix of doubles. Deliberately small: storage, row views
// and the few gather helpers the rest of the library needs.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  // new matrix holding the given rows, in the given order
  Matrix select_rows(std::span<const int> indices) const;

  std::vector<double> column(std::size_t c) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

using Vector = std::vector<double>;

Vector select(const Vector& values, std::span<const int> indices);

double mean(std::span<const double> values);
// population variance (divides by n)
double variance(std::span<const double> values);

}  // namespace msreg

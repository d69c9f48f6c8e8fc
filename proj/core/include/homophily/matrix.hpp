#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace homophily {

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// a * b
Matrix matmul(const Matrix& a, const Matrix& b);
// a^T * b
Matrix matmul_tn(const Matrix& a, const Matrix& b);
// a * b^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

// y = a*x + y, elementwise over equal shapes.
void axpy(double a, const Matrix& x, Matrix& y);

// Index of the largest entry in each row; ties go to the lowest column.
std::vector<int> row_argmax(const Matrix& m);

double max_abs_diff(const Matrix& a, const Matrix& b);

// Pairwise (cascade) summation; order is fixed so results are bitwise
// reproducible for a given input.
double pairwise_sum(std::span<const double> values);

}  // namespace homophily

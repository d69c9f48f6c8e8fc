#include "homophily/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <cblas.h>

namespace homophily {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) throw std::invalid_argument("Matrix: data size mismatch");
}

namespace {

// OpenBLAS is pinned to one thread: parallelism lives at the task level, and
// a fixed thread count keeps products bitwise reproducible.
void ensure_single_threaded_blas() {
  static const bool once = [] {
    openblas_set_num_threads(1);
    return true;
  }();
  (void)once;
}

void gemm(bool ta, bool tb, const Matrix& a, const Matrix& b, Matrix& out, std::size_t k) {
  if (out.size() == 0 || k == 0) return;
  ensure_single_threaded_blas();
  cblas_dgemm(CblasRowMajor, ta ? CblasTrans : CblasNoTrans, tb ? CblasTrans : CblasNoTrans,
              static_cast<int>(out.rows()), static_cast<int>(out.cols()), static_cast<int>(k), 1.0,
              a.data().data(), static_cast<int>(a.cols()), b.data().data(), static_cast<int>(b.cols()), 0.0,
              out.data().data(), static_cast<int>(out.cols()));
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
  Matrix out(a.rows(), b.cols());
  gemm(false, false, a, b, out, a.cols());
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("matmul_tn: shape mismatch");
  Matrix out(a.cols(), b.cols());
  gemm(true, false, a, b, out, a.rows());
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: shape mismatch");
  Matrix out(a.rows(), b.rows());
  gemm(false, true, a, b, out, a.cols());
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

void axpy(double a, const Matrix& x, Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw std::invalid_argument("axpy: shape mismatch");
  auto& yd = y.data();
  const auto& xd = x.data();
  for (std::size_t i = 0; i < yd.size(); ++i) yd[i] += a * xd[i];
}

std::vector<int> row_argmax(const Matrix& m) {
  std::vector<int> out(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < r.size(); ++j)
      if (r[j] > r[best]) best = j;
    out[i] = static_cast<int>(best);
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 32;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace homophily

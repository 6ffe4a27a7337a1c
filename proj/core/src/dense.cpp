#include "eigenwave/dense.hpp"

#include <algorithm>
#include <utility>

#include "eigenwave/errors.hpp"

namespace eigenwave {

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionError("matrix product: inner dimensions differ");
  DenseMatrix out(rows_, rhs.cols_);
  for (std::size_t j = 0; j < rhs.cols_; ++j) {
    auto oj = out.col(j);
    for (std::size_t k = 0; k < cols_; ++k) {
      const double b = rhs(k, j);
      if (b == 0.0) continue;
      axpy(b, col(k), oj);
    }
  }
  return out;
}

double DenseMatrix::asymmetry() const {
  double m = 0.0;
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = j + 1; i < rows_; ++i)
      m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

double DenseMatrix::max_abs() const { return norm_inf(data_); }

double DenseMatrix::frobenius() const { return norm2(data_); }

Cholesky::Cholesky(DenseMatrix a) : factor_(std::move(a)) {
  const std::size_t n = factor_.rows();
  if (factor_.cols() != n) throw DimensionError("cholesky: matrix is not square");
  DenseMatrix& l = factor_;
  end_.assign(n, n);
  // Left-looking by columns so the inner loops run down contiguous storage.
  for (std::size_t j = 0; j < n; ++j) {
    auto cj = l.col(j);
    for (std::size_t k = 0; k < j; ++k) {
      const double ljk = l(j, k);
      if (ljk == 0.0) continue;
      const auto ck = l.col(k);
      for (std::size_t i = j; i < end_[k]; ++i) cj[i] -= ljk * ck[i];
    }
    const double d = cj[j];
    if (!(d > 0.0)) throw NumericalError("cholesky: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    cj[j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) cj[i] /= ljj;
    for (std::size_t i = 0; i < j; ++i) cj[i] = 0.0;
    std::size_t e = n;
    while (e > j + 1 && cj[e - 1] == 0.0) --e;
    end_[j] = e;
  }
}

void Cholesky::solve_in_place(std::span<double> b) const {
  const std::size_t n = factor_.rows();
  if (b.size() != n) throw DimensionError("cholesky solve: length mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    b[j] /= factor_(j, j);
    const double bj = b[j];
    const auto cj = factor_.col(j);
    for (std::size_t i = j + 1; i < end_[j]; ++i) b[i] -= cj[i] * bj;
  }
  for (std::size_t jj = n; jj-- > 0;) {
    double s = b[jj];
    auto cj = factor_.col(jj);
    for (std::size_t i = jj + 1; i < end_[jj]; ++i) s -= cj[i] * b[i];
    b[jj] = s / factor_(jj, jj);
  }
}

}  // namespace eigenwave

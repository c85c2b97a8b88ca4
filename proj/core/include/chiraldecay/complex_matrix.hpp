#pragma once

#include <complex>
#include <vector>

#include "chiraldecay/errors.hpp"

namespace chiraldecay {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Sized for the effective-model regime
// (N <= 64); no attempt at blocking or expression templates.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatchError("matrix product: inner dimensions differ");
    ComplexMatrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  std::vector<cplx> apply(const std::vector<cplx>& x) const {
    if (static_cast<int>(x.size()) != cols_)
      throw DimensionMismatchError("matrix-vector product: size mismatch");
    std::vector<cplx> y(rows_);
    for (int i = 0; i < rows_; ++i) {
      cplx acc = 0.0;
      for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }

  // Maximum column sum of absolute values.
  double norm_one() const {
    double best = 0.0;
    for (int j = 0; j < cols_; ++j) {
      double s = 0.0;
      for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
      if (s > best) best = s;
    }
    return best;
  }

  double norm_max() const {
    double best = 0.0;
    for (const auto& v : data_) best = std::max(best, std::abs(v));
    return best;
  }

  bool is_lower_triangular() const {
    for (int i = 0; i < rows_; ++i)
      for (int j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != 0.0) return false;
    return true;
  }
  bool is_upper_triangular() const {
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < i && j < cols_; ++j)
        if ((*this)(i, j) != 0.0) return false;
    return true;
  }

  bool all_finite() const {
    for (const auto& v : data_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

inline double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

inline cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace chiraldecay

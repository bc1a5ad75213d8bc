// SPDX-License-Identifier: MIT
//
// Dense linear algebra for the implicit step: the Newton systems here are
// at most 6x6, so a plain LU factorization with partial pivoting plus a
// direct 1-norm condition estimate (via the explicit inverse) is both
// adequate and easy to audit.

#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "hjint/error.hpp"

namespace hjint {

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[i * cols_ + j]; }
  double operator()(int i, int j) const { return a_[i * cols_ + j]; }

  double norm1() const {  // max column sum
    double best = 0.0;
    for (int j = 0; j < cols_; ++j) {
      double s = 0.0;
      for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
      if (s > best) best = s;
    }
    return best;
  }

 private:
  int rows_, cols_;
  std::vector<double> a_;
};

// LU factorization with partial pivoting of a square matrix.
class LuFactorization {
 public:
  explicit LuFactorization(Matrix a) : lu_(std::move(a)), piv_(lu_.rows()) {
    const int n = lu_.rows();
    if (lu_.cols() != n) throw Error("lu: matrix not square");
    for (int i = 0; i < n; ++i) piv_[i] = i;
    for (int k = 0; k < n; ++k) {
      int p = k;
      double best = std::abs(lu_(k, k));
      for (int i = k + 1; i < n; ++i) {
        const double v = std::abs(lu_(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (p != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(piv_[k], piv_[p]);
      }
      if (best == 0.0) {
        singular_ = true;
        return;
      }
      for (int i = k + 1; i < n; ++i) {
        lu_(i, k) /= lu_(k, k);
        const double m = lu_(i, k);
        for (int j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
      }
    }
  }

  bool singular() const { return singular_; }

  std::vector<double> solve(const std::vector<double>& b) const {
    const int n = lu_.rows();
    if (singular_) throw SingularJacobian("lu solve: exactly singular matrix",
                                          std::numeric_limits<double>::infinity());
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[piv_[i]];
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
      x[i] /= lu_(i, i);
    }
    return x;
  }

  Matrix inverse() const {
    const int n = lu_.rows();
    Matrix inv(n, n);
    std::vector<double> e(n, 0.0);
    for (int j = 0; j < n; ++j) {
      e[j] = 1.0;
      std::vector<double> col = solve(e);
      for (int i = 0; i < n; ++i) inv(i, j) = col[i];
      e[j] = 0.0;
    }
    return inv;
  }

 private:
  Matrix lu_;
  std::vector<int> piv_;
  bool singular_ = false;
};

// 1-norm condition estimate ||A||_1 * ||A^-1||_1; infinity when exactly
// singular.
inline double condition_estimate(const Matrix& a) {
  LuFactorization lu(a);
  if (lu.singular()) return std::numeric_limits<double>::infinity();
  return a.norm1() * lu.inverse().norm1();
}

}  // namespace hjint

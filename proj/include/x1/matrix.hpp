#pragma once

#include <string>
#include <vector>

#include "x1/poly.hpp"

namespace x1 {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : r_(rows), c_(cols), a_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  std::vector<T> row(std::size_t i) const { return {a_.begin() + i * c_, a_.begin() + (i + 1) * c_}; }
  void set_row(std::size_t i, const std::vector<T>& v) {
    for (std::size_t j = 0; j < c_; ++j) (*this)(i, j) = v[j];
  }

  Matrix transpose() const {
    Matrix t(c_, r_, a_.empty() ? T() : a_[0]);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw Error("domain", "matrix dimension mismatch");
    T z = zero_like(a.a_.empty() ? b.a_[0] : a.a_[0]);
    Matrix m(a.r_, b.c_, z);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const T& x = a(i, k);
        if (detail::coeff_is_zero(x)) continue;
        for (std::size_t j = 0; j < b.c_; ++j) m(i, j) += x * b(k, j);
      }
    return m;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
    return a;
  }
  friend Matrix operator*(Matrix a, const T& s) {
    for (auto& x : a.a_) x *= s;
    return a;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  // v * M for a row vector v.
  std::vector<T> left_mul(const std::vector<T>& v) const {
    std::vector<T> out(c_, zero_like(a_[0]));
    for (std::size_t i = 0; i < r_; ++i) {
      if (detail::coeff_is_zero(v[i])) continue;
      for (std::size_t j = 0; j < c_; ++j) out[j] += v[i] * (*this)(i, j);
    }
    return out;
  }
  // M * v for a column vector v.
  std::vector<T> right_mul(const std::vector<T>& v) const {
    std::vector<T> out(r_, zero_like(a_[0]));
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!detail::coeff_is_zero(x)) return false;
    return true;
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> a_;
};

// Reduced row echelon form in place over a field; returns pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && detail::coeff_is_zero(m(piv, col))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    T inv = inverse(m(row, col));
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || detail::coeff_is_zero(m(r, col))) continue;
      T c = m(r, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(r, j) -= c * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m) {
  return rref(m).size();
}

// Basis of {v : A v = 0} (column vectors).
template <class T>
std::vector<std::vector<T>> matrix_kernel(const Matrix<T>& A, const T& zero, const T& one) {
  Matrix<T> m = A;
  auto pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<T>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<T> v(m.cols(), zero);
    v[free] = one;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = zero - m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Basis of {v : v A = 0} (row vectors).
template <class T>
std::vector<std::vector<T>> left_kernel(const Matrix<T>& A, const T& zero, const T& one) {
  return matrix_kernel(A.transpose(), zero, one);
}

// Solves x A = b for row vector x (A has full row rank on the relevant span);
// returns false if no solution.
template <class T>
bool solve_left(const Matrix<T>& A, const std::vector<T>& b, std::vector<T>& x, const T& zero,
                const T& one) {
  // Transpose: A^T x^T = b^T. Augment and reduce.
  const std::size_t n = A.rows(), m = A.cols();
  Matrix<T> aug(m, n + 1, zero);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = A(j, i);
    aug(i, n) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == n) return false;
  x.assign(n, zero);
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, n);
  (void)one;
  return true;
}

template <class T>
Matrix<T> inverse_matrix(const Matrix<T>& A, const T& zero, const T& one) {
  const std::size_t n = A.rows();
  Matrix<T> aug(n, 2 * n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = A(i, j);
    aug(i, n + i) = one;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw Error("singular", "matrix is singular");
  Matrix<T> inv(n, n, zero);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

// det(tI - A) via reduction to Hessenberg form.
template <class T>
Poly<T> charpoly_matrix(const Matrix<T>& A, const T& zero, const T& one) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw Error("domain", "charpoly of a non-square matrix");
  Matrix<T> H = A;
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t i = m;
    while (i < n && detail::coeff_is_zero(H(i, m - 1))) ++i;
    if (i == n) continue;
    if (i != m) {
      for (std::size_t j = 0; j < n; ++j) std::swap(H(i, j), H(m, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(H(j, i), H(j, m));
    }
    T inv = inverse(H(m, m - 1));
    for (std::size_t r = m + 1; r < n; ++r) {
      if (detail::coeff_is_zero(H(r, m - 1))) continue;
      T u = H(r, m - 1) * inv;
      for (std::size_t j = 0; j < n; ++j) H(r, j) -= u * H(m, j);
      for (std::size_t j = 0; j < n; ++j) H(j, m) += u * H(j, r);
    }
  }
  // p_k = det(tI - H_k) for the leading k x k block.
  std::vector<Poly<T>> p(n + 1);
  p[0] = Poly<T>::constant(one);
  Poly<T> t = Poly<T>::x(one);
  for (std::size_t k = 1; k <= n; ++k) {
    p[k] = (t - Poly<T>::constant(H(k - 1, k - 1))) * p[k - 1];
    T prod = one;
    for (std::size_t i = 1; i < k; ++i) {
      prod *= H(k - i, k - i - 1);
      T c = prod * H(k - i - 1, k - 1);
      p[k] -= Poly<T>::constant(c) * p[k - i - 1];
    }
  }
  (void)zero;
  return p[n];
}

template <class T>
Matrix<T> matrix_pow(const Matrix<T>& A, unsigned long e, const T& zero, const T& one) {
  Matrix<T> r = Matrix<T>::identity(A.rows(), zero, one), b = A;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

// Evaluates polynomial f at a square matrix.
template <class T>
Matrix<T> poly_eval_matrix(const Poly<T>& f, const Matrix<T>& A, const T& zero, const T& one) {
  Matrix<T> r(A.rows(), A.cols(), zero);
  for (std::size_t i = f.size(); i-- > 0;) r = r * A + Matrix<T>::identity(A.rows(), zero, one) * f[i];
  return r;
}

using ZMatrix = Matrix<Integer>;
using QMatrix = Matrix<Rational>;

// Row Hermite normal form of an integer matrix: returns the nonzero rows. When
// `transform` is given it receives U (unimodular) with U * A = [H; 0].
ZMatrix hnf_rows(const ZMatrix& A, ZMatrix* transform = nullptr, std::size_t* rank_out = nullptr);
// Z-basis (rows) of {v in Z^r : v A = 0}.
ZMatrix integer_left_kernel(const ZMatrix& A);
Integer determinant(const ZMatrix& A);  // Bareiss

}  // namespace x1

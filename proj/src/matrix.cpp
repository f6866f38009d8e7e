#include "x1/matrix.hpp"

namespace x1 {

ZMatrix hnf_rows(const ZMatrix& A, ZMatrix* transform, std::size_t* rank_out) {
  const std::size_t r = A.rows(), c = A.cols();
  ZMatrix M = A;
  ZMatrix U = ZMatrix::identity(r, Integer(0), Integer(1));
  auto combine = [&](ZMatrix& X, std::size_t i, std::size_t j, const Integer& s, const Integer& t,
                     const Integer& u, const Integer& v) {
    // (row_i, row_j) <- (s row_i + t row_j, u row_i + v row_j)
    for (std::size_t k = 0; k < X.cols(); ++k) {
      Integer a = X(i, k), b = X(j, k);
      X(i, k) = s * a + t * b;
      X(j, k) = u * a + v * b;
    }
  };
  std::size_t row = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t col = 0; col < c && row < r; ++col) {
    for (std::size_t i = row + 1; i < r; ++i) {
      if (M(i, col) == 0) continue;
      Integer a = M(row, col), b = M(i, col), g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Integer u = -b / g, v = a / g;
      combine(M, row, i, s, t, u, v);
      if (transform) combine(U, row, i, s, t, u, v);
    }
    if (M(row, col) == 0) continue;
    if (M(row, col) < 0) {
      for (std::size_t k = 0; k < c; ++k) M(row, k) = -M(row, k);
      if (transform)
        for (std::size_t k = 0; k < r; ++k) U(row, k) = -U(row, k);
    }
    for (std::size_t i = 0; i < row; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), M(i, col).get_mpz_t(), M(row, col).get_mpz_t());
      if (q == 0) continue;
      for (std::size_t k = 0; k < c; ++k) M(i, k) -= q * M(row, k);
      if (transform)
        for (std::size_t k = 0; k < r; ++k) U(i, k) -= q * U(row, k);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  if (rank_out) *rank_out = row;
  if (transform) *transform = U;
  ZMatrix H(row, c, Integer(0));
  for (std::size_t i = 0; i < row; ++i)
    for (std::size_t k = 0; k < c; ++k) H(i, k) = M(i, k);
  return H;
}

ZMatrix integer_left_kernel(const ZMatrix& A) {
  ZMatrix U;
  std::size_t rk = 0;
  hnf_rows(A, &U, &rk);
  ZMatrix K(A.rows() - rk, A.rows(), Integer(0));
  for (std::size_t i = rk; i < A.rows(); ++i)
    for (std::size_t k = 0; k < A.rows(); ++k) K(i - rk, k) = U(i, k);
  // Tidy the kernel basis itself into Hermite form.
  if (K.rows() == 0) return K;
  return hnf_rows(K);
}

Integer determinant(const ZMatrix& A) {
  const std::size_t n = A.rows();
  if (n == 0) return 1;
  ZMatrix M = A;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (M(k, k) == 0) {
      std::size_t i = k + 1;
      while (i < n && M(i, k) == 0) ++i;
      if (i == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(M(i, j), M(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
      }
      M(i, k) = 0;
    }
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

}  // namespace x1

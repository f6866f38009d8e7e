#include "x1/lattice.hpp"

#include <cmath>
#include <sstream>

#include <mpfr.h>

namespace x1 {

namespace {

Integer dot(const ZMatrix& b, std::size_t i, std::size_t j) {
  Integer s = 0;
  for (std::size_t c = 0; c < b.cols(); ++c) s += b(i, c) * b(j, c);
  return s;
}

Integer round_div(const Integer& a, const Integer& d) {
  // nearest integer to a/d, d > 0
  Integer num = 2 * a + d, q;
  Integer den = 2 * d;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

}  // namespace

// Cohen, Algorithm 2.6.7, with a general rational delta.
ZMatrix lll_reduce(const ZMatrix& basis, const Rational& delta, ZMatrix* transform) {
  if (delta <= Rational(1, 4) || delta >= 1) throw Error("domain", "LLL delta must lie in (1/4, 1)");
  const std::size_t n = basis.rows();
  ZMatrix b = basis;
  ZMatrix H = ZMatrix::identity(n, Integer(0), Integer(1));
  if (n == 0) {
    if (transform) *transform = H;
    return b;
  }
  const Integer dn = delta.get_num(), dd = delta.get_den();
  // d[i] for i = 0..n (d[0] = 1), lam[k][j] for j < k, 0-based vectors.
  std::vector<Integer> d(n + 1, 0);
  std::vector<std::vector<Integer>> lam(n, std::vector<Integer>(n, 0));
  d[0] = 1;
  d[1] = dot(b, 0, 0);
  if (d[1] == 0) throw Error("dependent-basis", "LLL input rows are linearly dependent");

  auto row_sub = [&](ZMatrix& m, std::size_t k, std::size_t l, const Integer& q) {
    for (std::size_t c = 0; c < m.cols(); ++c) m(k, c) -= q * m(l, c);
  };
  // vector indices k, l are 0-based; d index of vector k is k+1
  auto red = [&](std::size_t k, std::size_t l) {
    if (2 * abs(lam[k][l]) <= d[l + 1]) return;
    Integer q = round_div(lam[k][l], d[l + 1]);
    row_sub(b, k, l, q);
    row_sub(H, k, l, q);
    lam[k][l] -= q * d[l + 1];
    for (std::size_t i = 0; i < l; ++i) lam[k][i] -= q * lam[l][i];
  };
  auto swap = [&](std::size_t k, std::size_t kmax) {
    for (std::size_t c = 0; c < b.cols(); ++c) std::swap(b(k, c), b(k - 1, c));
    for (std::size_t c = 0; c < H.cols(); ++c) std::swap(H(k, c), H(k - 1, c));
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
    Integer l = lam[k][k - 1];
    Integer B = (d[k - 1] * d[k + 1] + l * l) / d[k];
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      Integer t = lam[i][k];
      lam[i][k] = (d[k + 1] * lam[i][k - 1] - l * t) / d[k];
      lam[i][k - 1] = (B * t + l * lam[i][k]) / d[k + 1];
    }
    d[k] = B;
  };

  std::size_t k = 1, kmax = 0;
  while (k < n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 0; j <= k; ++j) {
        Integer u = dot(b, k, j);
        for (std::size_t i = 0; i < j; ++i) u = (d[i + 1] * u - lam[k][i] * lam[j][i]) / d[i];
        if (j < k)
          lam[k][j] = u;
        else {
          if (u == 0) throw Error("dependent-basis", "LLL input rows are linearly dependent");
          d[k + 1] = u;
        }
      }
    }
    red(k, k - 1);
    // Lovasz: dd*d_k*d_{k-2} < dn*d_{k-1}^2 - dd*lam^2 triggers a swap
    if (dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lam[k][k - 1] * lam[k][k - 1]) {
      swap(k, kmax);
      if (k > 1) --k;
      continue;
    }
    for (std::size_t l = k - 1; l-- > 0;) red(k, l);
    ++k;
  }
  if (transform) *transform = H;
  return b;
}

double sufficiency_threshold(int m, const Integer& height) {
  double lf = std::lgamma(2.0 * m + 1.0);
  return (m + 1) * lf + double(m) * (m + 1) * log_abs(height) +
         double(m) * m * (m + 1) / 4.0 * std::log(2.0);
}

double resultant_threshold(int d, const Integer& height) {
  return d * std::log(d + 1.0) + 2.0 * d * log_abs(height) + d * d / 2.0 * std::log(2.0);
}

Sufficiency check_sufficiency(const ReconstructionInstance& inst) {
  Sufficiency s;
  for (const auto& f : inst.factors) s.lhs += f.factor.degree() * log_abs(f.modulus);
  s.rhs = std::max(sufficiency_threshold((inst.degree + 1) / 2, inst.height),
                   resultant_threshold(inst.degree, inst.height));
  return s;
}

ZMatrix factor_lattice(const std::vector<ModularFactor>& factors, int degree) {
  const std::size_t dim = degree + 1;
  ZMatrix L;
  Integer theta = 1;
  for (const auto& f : factors) {
    const int a = f.factor.degree();
    if (a < 1 || a > degree) throw Error("domain", "factor degree out of range");
    if (!f.factor.is_monic()) throw Error("domain", "factor must be monic");
    ZMatrix Li(dim, dim, Integer(0));
    for (int j = 0; j < a; ++j) Li(j, j) = f.modulus;
    for (int j = 0; j + a <= degree; ++j)
      for (int c = 0; c <= a; ++c) Li(a + j, j + c) = f.factor[c];
    Integer ti = pow(f.modulus, a);
    if (L.rows() == 0) {
      L = Li;
    } else {
      // Coprime indices: L cap Li = ti*L + theta*Li.
      ZMatrix S(2 * dim, dim, Integer(0));
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
          S(i, j) = ti * L(i, j);
          S(dim + i, j) = theta * Li(i, j);
        }
      L = hnf_rows(S);
    }
    theta *= ti;
  }
  return L;
}

ZPoly reconstruct_charpoly(const ReconstructionInstance& inst) {
  const int d = inst.degree;
  if (d < 1) throw Error("domain", "degree must be positive");
  for (std::size_t i = 0; i < inst.factors.size(); ++i)
    for (std::size_t j = i + 1; j < inst.factors.size(); ++j)
      if (gcd(inst.factors[i].modulus, inst.factors[j].modulus) != 1)
        throw Error("non-coprime", "moduli " + inst.factors[i].modulus.get_str() + " and " +
                                       inst.factors[j].modulus.get_str() + " are not coprime");
  Sufficiency s = check_sufficiency(inst);
  if (!s.ok()) {
    std::ostringstream os;
    os << "insufficient modular data: log product " << s.lhs << " <= threshold " << s.rhs
       << " (deficit " << (s.rhs - s.lhs) << ")";
    throw Error("insufficient-modular-data", os.str());
  }
  ZMatrix R = lll_reduce(factor_lattice(inst.factors, d));
  for (std::size_t r = 0; r < R.rows(); ++r) {
    std::vector<Integer> c(d + 1);
    for (int j = 0; j <= d; ++j) c[j] = R(r, j);
    ZPoly P(std::move(c));
    if (P.degree() != d) continue;
    if (P.lead() == -1) P = -P;
    if (P.lead() != 1) continue;
    if (naive_height(P) > inst.height) continue;
    bool ok = true;
    for (const auto& f : inst.factors) {
      // P mod (A_i, N_i) must vanish: reduce P by the monic A_i over Z, then mod N_i.
      ZPoly rem = divrem(P, f.factor).second;
      for (const auto& x : rem.coeffs())
        if (mod(x, f.modulus) != 0) ok = false;
    }
    if (ok) return P;
  }
  throw Error("inconsistent-factors", "no monic degree-" + std::to_string(d) +
                                          " lattice vector of height <= H matches all factors");
}

PrimeBudget prime_budget(unsigned n, const Integer& p, std::optional<Integer> override_x) {
  PrimeBudget b;
  b.n = n;
  b.p = p;
  mpfr_t lp, L, t;
  mpfr_inits2(256, lp, L, t, (mpfr_ptr)0);
  mpfr_set_z(lp, p.get_mpz_t(), MPFR_RNDN);
  mpfr_log(lp, lp, MPFR_RNDN);
  Integer n6 = pow(Integer(n), 6);
  mpfr_mul_z(L, lp, n6.get_mpz_t(), MPFR_RNDN);
  mpfr_log(t, L, MPFR_RNDN);
  mpfr_mul(t, t, L, MPFR_RNDN);
  mpfr_mul_ui(t, t, 2, MPFR_RNDN);
  mpfr_ceil(t, t);
  mpfr_get_z(b.formula.get_mpz_t(), t, MPFR_RNDN);
  mpfr_clears(lp, L, t, (mpfr_ptr)0);
  b.overridden = override_x.has_value();
  b.x = override_x ? *override_x : b.formula;
  return b;
}

}  // namespace x1

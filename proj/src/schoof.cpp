#include "x1/galois.hpp"

namespace x1 {

namespace {

// Raised when an inversion meets a zero divisor; carries the factor of the
// modulus to continue on.
struct Split {
  ZnVec g;
};

// A point (a(x), y b(x)) over F_p[x]/(g) on y^2 = x^3 + A x + B.
struct RPoint {
  ZnVec a, b;
  bool inf = false;
};

class Ring {
 public:
  Ring(Integer N, ZnVec g, const Integer& A, const Integer& B) : N_(std::move(N)), M_(N_, std::move(g)) {
    f_ = M_.reduce(zn_reduce({B, A, Integer(0), Integer(1)}, N_));
    A_ = A;
  }
  const ZnModulus& mod() const { return M_; }

  ZnVec inverse(const ZnVec& d) const {
    const ZnVec& g = M_.poly();
    ZnVec G = zn_gcd(d, g, N_);
    if (zn_degree(G) == zn_degree(g)) throw Error("schoof", "inverting zero");
    if (zn_degree(G) > 0) throw Split{zn_divrem(g, G, N_).first};
    return zn_invmod(d, g, N_);
  }

  RPoint dbl(const RPoint& P) const {
    if (P.inf) return P;
    // L = (3a^2 + A) / (2 f b)
    ZnVec num = zn_add(zn_scale(M_.mul(P.a, P.a), Integer(3), N_), zn_reduce({A_}, N_), N_);
    ZnVec L = M_.mul(num, inverse(zn_scale(M_.mul(f_, P.b), Integer(2), N_)));
    return finish(L, P, P);
  }

  RPoint add(const RPoint& P, const RPoint& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    const ZnVec& g = M_.poly();
    ZnVec d = zn_sub(Q.a, P.a, N_);
    if (zn_degree(zn_gcd(d, g, N_)) == zn_degree(g)) {
      ZnVec E = zn_gcd(zn_add(P.b, Q.b, N_), g, N_);
      if (zn_degree(E) == zn_degree(g)) return RPoint{{}, {}, true};
      if (zn_degree(E) > 0) throw Split{zn_divrem(g, E, N_).first};
      return dbl(P);
    }
    ZnVec L = M_.mul(zn_sub(Q.b, P.b, N_), inverse(d));
    return finish(L, P, Q);
  }

  RPoint mul(RPoint P, std::uint64_t k) const {
    RPoint R{{}, {}, true};
    for (; k; k >>= 1) {
      if (k & 1) R = add(R, P);
      if (k > 1) P = dbl(P);
    }
    return R;
  }

 private:
  RPoint finish(const ZnVec& L, const RPoint& P, const RPoint& Q) const {
    ZnVec x3 = zn_sub(zn_sub(M_.mul(f_, M_.mul(L, L)), P.a, N_), Q.a, N_);
    ZnVec y3 = zn_sub(M_.mul(L, zn_sub(P.a, x3, N_)), P.b, N_);
    return {M_.reduce(x3), M_.reduce(y3), false};
  }

  Integer N_;
  ZnModulus M_;
  ZnVec f_;
  Integer A_;
};

// psi_n for odd n and psi_n / 2y for even n, on y^2 = x^3 + A x + B.
ZnVec division_poly(std::uint64_t n, const Integer& A, const Integer& B, const Integer& N) {
  std::vector<ZnVec> f(std::max<std::uint64_t>(n + 1, 5));
  const Integer A2 = A * A;
  f[0] = {};
  f[1] = {Integer(1)};
  f[2] = {Integer(1)};
  f[3] = zn_reduce({-A2, 12 * B, 6 * A, Integer(0), Integer(3)}, N);
  f[4] = zn_reduce({2 * (-8 * B * B - A2 * A), -8 * A * B, -10 * A2, 40 * B, 10 * A, Integer(0), Integer(2)}, N);
  const ZnVec F = zn_reduce({4 * B, 4 * A, Integer(0), Integer(4)}, N);
  const ZnVec F2 = zn_mul(F, F, N);
  auto cube = [&](const ZnVec& a) { return zn_mul(zn_mul(a, a, N), a, N); };
  for (std::uint64_t k = 5; k <= n; ++k) {
    const std::uint64_t m = k / 2;
    if (k % 2) {
      ZnVec s = zn_mul(f[m + 2], cube(f[m]), N), t = zn_mul(f[m - 1], cube(f[m + 1]), N);
      if (m % 2 == 0)
        s = zn_mul(F2, s, N);
      else
        t = zn_mul(F2, t, N);
      f[k] = zn_sub(s, t, N);
    } else {
      ZnVec s = zn_mul(f[m + 2], zn_mul(f[m - 1], f[m - 1], N), N);
      ZnVec t = zn_mul(f[m - 2], zn_mul(f[m + 1], f[m + 1], N), N);
      f[k] = zn_mul(f[m], zn_sub(s, t, N), N);
    }
  }
  return f[n];
}

}  // namespace

std::uint64_t schoof_mod_ell(const std::array<Integer, 5>& ai, const Integer& p, std::uint64_t ell) {
  if (ell < 3 || !is_prime(Integer(ell))) throw Error("domain", "ell must be an odd prime");
  if (p <= 3 || p == Integer(ell)) throw Error("domain", "p must be a prime above 3 and distinct from ell");
  const auto& [a1, a2, a3, a4, a6] = ai;
  const Integer b2 = a1 * a1 + 4 * a2, b4 = 2 * a4 + a1 * a3, b6 = a3 * a3 + 4 * a6;
  const Integer c4 = b2 * b2 - 24 * b4, c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
  // y^2 = x^3 - 27 c4 x - 54 c6 is isomorphic over F_p
  const Integer A = mod(Integer(-27 * c4), p), B = mod(Integer(-54 * c6), p);
  if (mod(Integer(4 * A * A * A + 27 * B * B), p) == 0) throw Error("bad-reduction", "E has bad reduction at p");

  ZnVec psi = division_poly(ell, A, B, p);
  psi = zn_scale(psi, invmod(Integer(ell), p), p);
  if (zn_degree(zn_gcd(psi, zn_derivative(psi, p), p)) > 0)
    throw Error("bad-reduction", "division polynomial is not squarefree");

  Ring R(p, psi, A, B);
  ZnVec X1 = R.mod().x_power(p);
  ZnVec Y1 = R.mod().pow(zn_reduce({B, A, Integer(0), Integer(1)}, p), (p - 1) / 2);
  const std::uint64_t k = to_u64(mod(p, Integer(ell)));
  for (;;) {
    try {
      const ZnModulus& M = R.mod();
      RPoint Pi{X1, Y1}, Pi2{M.compose(X1, X1), M.mul(Y1, M.compose(Y1, X1))};
      RPoint S = R.add(Pi2, R.mul(RPoint{M.reduce({Integer(0), Integer(1)}), {Integer(1)}}, k));
      if (S.inf) return 0;
      RPoint T = Pi;
      for (std::uint64_t j = 1; j <= ell / 2; ++j, T = R.add(T, Pi)) {
        if (T.a != S.a) continue;
        if (T.b == S.b) return j;
        if (zn_add(T.b, S.b, p).empty()) return ell - j;
        throw Error("schoof", "Frobenius relation matched x but not y");
      }
      throw Error("schoof", "no trace residue satisfies the Frobenius relation");
    } catch (const Split& s) {
      R = Ring(p, s.g, A, B);
      X1 = R.mod().reduce(X1);
      Y1 = R.mod().reduce(Y1);
    }
  }
}

std::uint64_t schoof_mod_ell(const Weierstrass& E, std::uint64_t ell) {
  const GaloisField* F = E.field();
  if (F->degree() != 1) throw Error("unsupported", "schoof_mod_ell works over prime fields");
  return schoof_mod_ell({Integer(E.a1.to_u64()), Integer(E.a2.to_u64()), Integer(E.a3.to_u64()), Integer(E.a4.to_u64()),
                         Integer(E.a6.to_u64())},
                        Integer(F->characteristic()), ell);
}

}  // namespace x1

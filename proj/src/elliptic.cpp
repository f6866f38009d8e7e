#include "x1/elliptic.hpp"

#include <numeric>

namespace x1 {

Gf Weierstrass::b8() const {
  const GaloisField* F = field();
  return a1 * a1 * a6 + F->from_int(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
}

Gf Weierstrass::discriminant() const {
  const GaloisField* F = field();
  Gf B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
  return -B2 * B2 * B8 - F->from_int(8) * B4 * B4 * B4 - F->from_int(27) * B6 * B6 + F->from_int(9) * B2 * B4 * B6;
}

Gf Weierstrass::j_invariant() const {
  const GaloisField* F = field();
  Gf c4 = b2() * b2() - F->from_int(24) * b4();
  return c4 * c4 * c4 / discriminant();
}

bool Weierstrass::contains(const Gf& x, const Gf& y) const {
  return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6;
}

Weierstrass Weierstrass::map(const Embedding& e) const {
  return {e.map(a1), e.map(a2), e.map(a3), e.map(a4), e.map(a6)};
}

EPoint ec_neg(const Weierstrass& E, const EPoint& P) {
  if (P.infinity) return P;
  return EPoint::affine(P.x, -P.y - E.a1 * P.x - E.a3);
}

EPoint ec_add(const Weierstrass& E, const EPoint& P, const EPoint& Q) {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  Gf lambda, nu;
  if (P.x == Q.x) {
    Gf den = P.y + Q.y + E.a1 * Q.x + E.a3;
    if (den.is_zero()) return EPoint::at_infinity();
    const GaloisField* F = E.field();
    lambda = (F->from_int(3) * P.x * P.x + F->from_int(2) * E.a2 * P.x + E.a4 - E.a1 * P.y) / den;
  } else {
    lambda = (Q.y - P.y) / (Q.x - P.x);
  }
  nu = P.y - lambda * P.x;
  Gf x3 = lambda * lambda + E.a1 * lambda - E.a2 - P.x - Q.x;
  Gf y3 = -(lambda + E.a1) * x3 - nu - E.a3;
  return EPoint::affine(x3, y3);
}

EPoint ec_mul(const Weierstrass& E, const EPoint& P, const Integer& k) {
  if (k < 0) return ec_mul(E, ec_neg(E, P), -k);
  EPoint R = EPoint::at_infinity();
  const std::size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    R = ec_add(E, R, R);
    if (mpz_tstbit(k.get_mpz_t(), i)) R = ec_add(E, R, P);
  }
  return R;
}

unsigned ec_order_up_to(const Weierstrass& E, const EPoint& P, unsigned bound) {
  EPoint R = P;
  for (unsigned k = 1; k <= bound; ++k) {
    if (R.infinity) return k;
    R = ec_add(E, R, P);
  }
  return 0;
}

Weierstrass tate_normal_form(const Gf& b, const Gf& c) {
  const GaloisField* F = b.field();
  return {F->one() - c, -b, -b, F->zero(), F->zero()};
}

Weierstrass CoordinateChange::apply(const Weierstrass& E) const {
  const GaloisField* F = E.field();
  Gf two = F->from_int(2), three = F->from_int(3);
  Gf ui = u.inv();
  Gf u2 = ui * ui, u3 = u2 * ui, u4 = u2 * u2, u6 = u3 * u3;
  Weierstrass out;
  out.a1 = (E.a1 + two * s) * ui;
  out.a2 = (E.a2 - s * E.a1 + three * r - s * s) * u2;
  out.a3 = (E.a3 + r * E.a1 + two * t) * u3;
  out.a4 = (E.a4 - s * E.a3 + two * r * E.a2 - (t + r * s) * E.a1 + three * r * r - two * s * t) * u4;
  out.a6 = (E.a6 + r * E.a4 + r * r * E.a2 + r * r * r - t * E.a3 - t * t - r * t * E.a1) * u6;
  return out;
}

EPoint CoordinateChange::to_new(const EPoint& P) const {
  if (P.infinity) return P;
  Gf ui = u.inv();
  Gf x = (P.x - r) * ui * ui;
  Gf y = (P.y - s * u * u * x - t) * ui * ui * ui;
  return EPoint::affine(x, y);
}

std::pair<Gf, Gf> tate_parameters(const Weierstrass& E, const EPoint& P) {
  if (P.infinity) throw Error("domain", "Tate normal form needs an affine point");
  const GaloisField* F = E.field();
  CoordinateChange shift{F->one(), P.x, F->zero(), P.y};
  Weierstrass E1 = shift.apply(E);
  if (E1.a3.is_zero()) throw Error("domain", "point has order 2");
  CoordinateChange tangent{F->one(), F->zero(), E1.a4 / E1.a3, F->zero()};
  Weierstrass E2 = tangent.apply(E1);
  if (E2.a2.is_zero()) throw Error("domain", "point has order 3");
  CoordinateChange scale{E2.a3 / E2.a2, F->zero(), F->zero(), F->zero()};
  Weierstrass E3 = scale.apply(E2);
  return {-E3.a2, F->one() - E3.a1};
}

VeluIsogeny::VeluIsogeny(const Weierstrass& E, const std::vector<EPoint>& kernel) : E_(E), kernel_(kernel) {
  const GaloisField* F = E.field();
  if (F->characteristic() <= 3) throw Error("domain", "isogenies need characteristic > 3");
  Gf two = F->from_int(2), three = F->from_int(3);
  std::vector<EPoint> seen;
  Gf v = F->zero(), w = F->zero();
  for (const auto& Q : kernel) {
    if (Q.infinity) continue;
    bool dup = false;
    for (const auto& S : seen)
      if (S.x == Q.x) dup = true;  // Q or -Q already taken
    if (dup) continue;
    seen.push_back(Q);
    Term t;
    t.xq = Q.x;
    t.yq = Q.y;
    t.gx = three * Q.x * Q.x + two * E.a2 * Q.x + E.a4 - E.a1 * Q.y;
    t.gy = -two * Q.y - E.a1 * Q.x - E.a3;
    bool order2 = t.gy.is_zero();
    t.v = order2 ? t.gx : two * t.gx - E.a1 * t.gy;
    t.u = t.gy * t.gy;
    v += t.v;
    w += t.u + Q.x * t.v;
    terms_.push_back(t);
  }
  F_ = E;
  F_.a4 = E.a4 - F->from_int(5) * v;
  F_.a6 = E.a6 - (E.a1 * E.a1 + F->from_int(4) * E.a2) * v - F->from_int(7) * w;
}

EPoint VeluIsogeny::operator()(const EPoint& P) const {
  if (P.infinity) return P;
  for (const auto& K : kernel_)
    if (K == P) return EPoint::at_infinity();
  const GaloisField* F = E_.field();
  Gf X = P.x, Y = P.y;
  Gf two = F->from_int(2);
  for (const auto& t : terms_) {
    Gf d = (P.x - t.xq).inv();
    Gf d2 = d * d, d3 = d2 * d;
    X += t.v * d + t.u * d2;
    Y -= t.u * (two * P.y + E_.a1 * P.x + E_.a3) * d3 + t.v * (E_.a1 * (P.x - t.xq) + P.y - t.yq) * d2 +
         (E_.a1 * t.u - t.gx * t.gy) * d2;
  }
  return EPoint::affine(X, Y);
}

namespace {

template <class P>
std::vector<P> f_sequence(const P& f3, const P& f4, const P& Fsq, const P& one, unsigned m) {
  std::vector<P> f(std::max(5u, m + 1));
  f[0] = P();
  f[1] = one;
  f[2] = one;
  f[3] = f3;
  f[4] = f4;
  for (unsigned n = 5; n <= m; ++n) {
    unsigned k = n / 2;
    if (n % 2) {
      if (k % 2 == 0)
        f[n] = Fsq * f[k + 2] * f[k] * f[k] * f[k] - f[k - 1] * f[k + 1] * f[k + 1] * f[k + 1];
      else
        f[n] = f[k + 2] * f[k] * f[k] * f[k] - Fsq * f[k - 1] * f[k + 1] * f[k + 1] * f[k + 1];
    } else {
      f[n] = f[k] * (f[k + 2] * f[k - 1] * f[k - 1] - f[k - 2] * f[k + 1] * f[k + 1]);
    }
  }
  return f;
}

}  // namespace

GfPoly division_polynomial_x(const Weierstrass& E, unsigned m) {
  const GaloisField* F = E.field();
  auto c = [&](std::int64_t v) { return F->from_int(v); };
  Gf B2 = E.b2(), B4 = E.b4(), B6 = E.b6(), B8 = E.b8();
  GfPoly Fx(std::vector<Gf>{B6, c(2) * B4, B2, c(4)});
  if (m == 2) return Fx;
  if (m % 2 == 0) throw Error("domain", "only m = 2 or odd m supported");
  GfPoly f3(std::vector<Gf>{B8, c(3) * B6, c(3) * B4, B2, c(3)});
  GfPoly f4(std::vector<Gf>{B4 * B8 - B6 * B6, B2 * B8 - B4 * B6, c(10) * B8, c(10) * B6, c(5) * B4, B2, c(2)});
  auto f = f_sequence(f3, f4, Fx * Fx, GfPoly::constant(F->one()), m);
  return f[m];
}

namespace {

// Points of E with the given x-coordinate over E's field.
std::vector<EPoint> lift_x(const Weierstrass& E, const Gf& x) {
  const GaloisField* F = E.field();
  GfPoly q(std::vector<Gf>{-(x * x * x + E.a2 * x * x + E.a4 * x + E.a6), E.a1 * x + E.a3, F->one()});
  std::vector<EPoint> out;
  for (const auto& y : roots(q)) out.push_back(EPoint::affine(x, y));
  return out;
}

}  // namespace

std::vector<std::vector<EPoint>> cyclic_subgroups(const Weierstrass& E, unsigned m, const GaloisField** field) {
  if (!is_prime(static_cast<std::uint64_t>(m))) throw Error("domain", "subgroup order must be prime");
  const GaloisField* F = E.field();
  const std::uint64_t p = F->characteristic();
  if (m == p) throw Error("inseparable", "m equals the characteristic");
  GfPoly psi = division_polynomial_x(E, m);
  unsigned L = 1;
  for (const auto& fac : poly_factor_ff(psi)) L = std::lcm(L, static_cast<unsigned>(fac.poly.degree()));
  for (unsigned extra : {1u, 2u}) {
    const GaloisField* K = GaloisField::get(p, F->degree() * L * extra);
    Embedding emb = Embedding::find(F, K);
    Weierstrass EK = E.map(emb);
    std::vector<Gf> xs = roots(emb.map(psi));
    std::vector<EPoint> pts;
    bool all = true;
    for (const auto& x : xs) {
      auto ps = lift_x(EK, x);
      if (ps.empty()) all = false;
      for (auto& P : ps) pts.push_back(P);
    }
    if (!all) continue;
    if (pts.size() + 1 != static_cast<std::size_t>(m) * m)
      throw Error("model-bug", "E[m] has the wrong size over the splitting field");
    std::vector<std::vector<EPoint>> groups;
    std::vector<bool> used(pts.size(), false);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (used[i]) continue;
      std::vector<EPoint> g{EPoint::at_infinity()};
      EPoint R = pts[i];
      for (unsigned k = 1; k < m; ++k) {
        g.push_back(R);
        for (std::size_t j = 0; j < pts.size(); ++j)
          if (pts[j] == R) used[j] = true;
        R = ec_add(EK, R, pts[i]);
      }
      groups.push_back(std::move(g));
    }
    if (field) *field = K;
    return groups;
  }
  throw Error("model-bug", "m-torsion not found over the quadratic extension of the splitting field");
}

Integer ec_count_naive(const Weierstrass& E) {
  const GaloisField* F = E.field();
  if (F->characteristic() == 2) throw Error("domain", "naive count needs odd characteristic");
  const std::uint64_t q = to_u64(F->order());
  Integer n = 1;
  Gf four = F->from_int(4);
  for (std::uint64_t i = 0; i < q; ++i) {
    Gf x = F->element_at(i);
    Gf l = E.a1 * x + E.a3;
    Gf d = l * l + four * (x * x * x + E.a2 * x * x + E.a4 * x + E.a6);
    if (d.is_zero())
      n += 1;
    else if (d.is_square())
      n += 2;
  }
  return n;
}

}  // namespace x1

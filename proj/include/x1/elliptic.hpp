#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "x1/factor.hpp"
#include "x1/gf.hpp"

namespace x1 {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a finite field.
struct Weierstrass {
  Gf a1, a2, a3, a4, a6;

  const GaloisField* field() const { return a1.field(); }
  Gf b2() const { return a1 * a1 + a4.field()->from_int(4) * a2; }
  Gf b4() const { return a4.field()->from_int(2) * a4 + a1 * a3; }
  Gf b6() const { return a3 * a3 + a4.field()->from_int(4) * a6; }
  Gf b8() const;
  Gf discriminant() const;
  Gf j_invariant() const;
  bool nonsingular() const { return !discriminant().is_zero(); }
  bool contains(const Gf& x, const Gf& y) const;
  Weierstrass map(const Embedding& e) const;
  friend bool operator==(const Weierstrass& a, const Weierstrass& b) {
    return a.a1 == b.a1 && a.a2 == b.a2 && a.a3 == b.a3 && a.a4 == b.a4 && a.a6 == b.a6;
  }
};

struct EPoint {
  Gf x, y;
  bool infinity = true;

  static EPoint at_infinity() { return {}; }
  static EPoint affine(Gf x, Gf y) { return {std::move(x), std::move(y), false}; }
  friend bool operator==(const EPoint& p, const EPoint& q) {
    if (p.infinity || q.infinity) return p.infinity == q.infinity;
    return p.x == q.x && p.y == q.y;
  }
  friend bool operator!=(const EPoint& p, const EPoint& q) { return !(p == q); }
};

EPoint ec_neg(const Weierstrass& E, const EPoint& P);
EPoint ec_add(const Weierstrass& E, const EPoint& P, const EPoint& Q);
EPoint ec_mul(const Weierstrass& E, const EPoint& P, const Integer& k);
// Smallest k in [1, bound] with kP = O, or 0.
unsigned ec_order_up_to(const Weierstrass& E, const EPoint& P, unsigned bound);

// E_{b,c}: y^2 + (1-c)xy - by = x^3 - bx^2, marked point (0, 0).
Weierstrass tate_normal_form(const Gf& b, const Gf& c);

// x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct CoordinateChange {
  Gf u, r, s, t;
  Weierstrass apply(const Weierstrass& E) const;  // the curve in the primed coordinates
  EPoint to_new(const EPoint& P) const;
};

// (b, c) of the Tate normal form of (E, P); P must have order >= 4.
std::pair<Gf, Gf> tate_parameters(const Weierstrass& E, const EPoint& P);

// Separable isogeny with the given finite kernel (all points, including O).
class VeluIsogeny {
 public:
  VeluIsogeny(const Weierstrass& E, const std::vector<EPoint>& kernel);
  const Weierstrass& domain() const { return E_; }
  const Weierstrass& codomain() const { return F_; }
  EPoint operator()(const EPoint& P) const;

 private:
  struct Term {
    Gf xq, yq, gx, gy, v, u;
  };
  Weierstrass E_, F_;
  std::vector<Term> terms_;
  std::vector<EPoint> kernel_;
};

// Polynomial in x whose roots are the x-coordinates of the nonzero m-torsion
// (m = 2: 4x^3 + b2 x^2 + 2 b4 x + b6; odd m: psi_m).
GfPoly division_polynomial_x(const Weierstrass& E, unsigned m);

// The m + 1 cyclic subgroups of order m (m prime) of E[m], each as a list of
// points over the smallest extension containing them. All groups live over the
// same field, returned through `field`.
std::vector<std::vector<EPoint>> cyclic_subgroups(const Weierstrass& E, unsigned m, const GaloisField** field);

// #E(F_q) by enumerating x, q small.
Integer ec_count_naive(const Weierstrass& E);

}  // namespace x1

#pragma once

#include <random>

#include "x1/curve_model.hpp"
#include "x1/modsym.hpp"

namespace oracle {

using namespace x1;

// Eichler-Shimura: det(t^2 - t T_p + p <p>) on the 2g-dimensional symbol space
// is the square of the zeta numerator. Evaluated at 4g + 1 integers and
// interpolated.
inline ZPoly hecke_zeta(const ModularSymbolSpace& M, unsigned p) {
  const ZMatrix T = M.hecke_matrix(p);
  const ZMatrix D = M.diamond_matrix(static_cast<long>(p));
  const std::size_t r = M.dimension();
  const ZMatrix I = ZMatrix::identity(r, Integer(0), Integer(1));
  const std::size_t deg = 2 * r;
  std::vector<Rational> xs, ys;
  for (std::size_t i = 0; i <= deg; ++i) {
    Integer t = static_cast<long>(i);
    xs.push_back(Rational(t));
    ys.push_back(Rational(determinant(I * (t * t) - T * t + D * Integer(p))));
  }
  QPoly L;
  for (std::size_t i = 0; i <= deg; ++i) {
    QPoly term = QPoly::constant(ys[i]);
    for (std::size_t j = 0; j <= deg; ++j) {
      if (j == i) continue;
      term = term * QPoly(std::vector<Rational>{-xs[j], Rational(1)});
      term = term * Rational(Rational(1) / (xs[i] - xs[j]));
    }
    L = L + term;
  }
  return sqrt_poly(clear_denominators(L));
}

// Random affine point on a hyperelliptic or plane model over F.
inline CurvePoint random_point(const CurveModel& M, const GaloisField* F, std::mt19937_64& rng) {
  for (;;) {
    Gf x = F->random(rng);
    GfPoly fiber = M.kind == ModelKind::hyperelliptic
                       ? GfPoly(std::vector<Gf>{-M.f_over(F).eval(x), M.h_over(F).eval(x), F->one()})
                       : M.equation.in_second(x);
    auto ys = roots(fiber);
    if (ys.empty()) continue;
    return {x, ys[rng() % ys.size()]};
  }
}

inline EPoint random_epoint(const Weierstrass& E, std::mt19937_64& rng) {
  const GaloisField* F = E.field();
  for (;;) {
    Gf x = F->random(rng);
    GfPoly q(std::vector<Gf>{-(x * x * x + E.a2 * x * x + E.a4 * x + E.a6), E.a1 * x + E.a3, F->one()});
    auto ys = roots(q);
    if (!ys.empty()) return EPoint::affine(x, ys[rng() % ys.size()]);
  }
}

}  // namespace oracle

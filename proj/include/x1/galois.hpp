#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "x1/jacobian.hpp"
#include "x1/zn_poly.hpp"

namespace x1 {

// iota(x P1 + y P2) at index x * ell + y; entry 0 (the origin) is zero.
std::vector<Gf> iota_table(const CurveModel& M, const TorsionBasis& B);
Gf iota_eval(const CurveModel& M, const TorsionBasis& B, std::uint64_t x, std::uint64_t y);

struct PiotaReduction {
  std::uint64_t p = 0;
  std::vector<std::uint64_t> coeffs;  // monic, degree |F|^2 - 1
  TorsionBasis basis;
  std::vector<Gf> values;  // iota_table(basis)
};
PiotaReduction piota_mod_p(const CurveModel& M, const HeckeEigenSystem& sys, std::uint64_t p, std::uint64_t seed);

struct IotaPolynomial {
  const HeckeEigenSystem* sys = nullptr;
  QPoly P;  // monic
  ZPoly Z;  // primitive integral multiple with positive leading coefficient
  std::vector<std::uint64_t> primes, holdout;
  // Anchor: iota values at the labels over F_{r^d}, with the basis they came from.
  std::uint64_t r = 0;
  const GaloisField* anchor_field = nullptr;
  std::vector<Gf> anchor_values;
  std::array<std::uint64_t, 4> anchor_frobenius{};

  Integer height() const;       // max |coefficient of Z|
  Integer denominator() const;  // lc(Z)
};

struct PiotaOptions {
  std::uint64_t start = 1000;  // first prime tried
  unsigned holdout = 2;
  std::uint64_t seed = 1;
  // With a bound H, reconstruct once the modulus exceeds 2 H^2; otherwise
  // accept a reconstruction that is stable over two further primes.
  std::optional<Integer> height_bound;
  unsigned max_primes = 4000;
  std::function<void(const std::string&)> log;
};
IotaPolynomial piota_global(const CurveModel& M, const HeckeEigenSystem& sys, const PiotaOptions& opt);

// Galois ring GR(r^k, d) = (Z / r^k)[t] / (m) with m a lift of the F_{r^d} modulus.
class GaloisRing {
 public:
  GaloisRing(const GaloisField* F, unsigned k);
  const Integer& modulus() const { return N_; }
  unsigned precision() const { return k_; }
  unsigned degree() const { return d_; }
  const GaloisField* residue_field() const { return F_; }

  ZnVec from_gf(const Gf& a) const;  // Teichmuller-free coordinate lift
  ZnVec from_integer(const Integer& a) const;
  ZnVec add(const ZnVec& a, const ZnVec& b) const { return zn_add(a, b, N_); }
  ZnVec sub(const ZnVec& a, const ZnVec& b) const { return zn_sub(a, b, N_); }
  ZnVec mul(const ZnVec& a, const ZnVec& b) const { return M_.mul(a, b); }
  ZnVec inv(const ZnVec& a) const;
  Gf reduce(const ZnVec& a) const;
  // Constant coordinate, throwing unless the element lies in Z / r^k.
  Integer to_integer(const ZnVec& a) const;
  ZnVec eval(const ZPoly& f, const ZnVec& x) const;

 private:
  const GaloisField* F_;
  unsigned k_, d_;
  Integer N_;
  ZnModulus M_;
};

// Roots of f (squarefree mod r, integral) lifted from `roots` mod r to GR(r^k, d).
std::vector<ZnVec> hensel_lift_ring(const GaloisRing& R, const ZPoly& f, const std::vector<Gf>& roots);

// 2 x 2 matrices over F_ell, row-major: (a, b, c, d) acting on columns.
using Mat2 = std::array<std::uint64_t, 4>;

struct ConjugacyClass {
  Mat2 rep;
  std::vector<Mat2> members;
  std::uint64_t trace = 0, det = 0;
};
std::vector<ConjugacyClass> gl2_classes(std::uint64_t ell);
// Index of the class containing m.
std::size_t class_of(const std::vector<ConjugacyClass>& classes, const Mat2& m, std::uint64_t ell);

struct FrobeniusClassData {
  const HeckeEigenSystem* sys = nullptr;
  ZPoly h;
  std::vector<ConjugacyClass> classes;
  std::vector<ZPoly> gamma;  // Gamma_C scaled to primitive integral polynomials
  unsigned precision = 0;    // r-adic digits used
};

struct GammaOptions {
  unsigned precision = 0;  // 0: from a root bound on P_iota
  unsigned max_precision = 1 << 16;
  std::function<void(const std::string&)> log;
};
FrobeniusClassData gamma_polys(const IotaPolynomial& iota, const GammaOptions& opt);

struct FrobeniusClass {
  std::size_t index = 0;
  Mat2 rep{};
  std::uint64_t trace = 0, det = 0;
  Integer resolvent;  // Tr(h(x) x^p) mod p
};
// Classes whose Gamma_C vanishes at Tr(h(x) x^p) mod p.
std::vector<std::size_t> vanishing_classes(const FrobeniusClassData& data, const IotaPolynomial& iota, const Integer& p,
                                           Integer* resolvent = nullptr);
// The unique vanishing class; "ambiguous-class" otherwise.
FrobeniusClass frobenius_class_large_p(const FrobeniusClassData& data, const IotaPolynomial& iota, const Integer& p);

// Trace of Frobenius mod ell for E over F_p by one Schoof step.
std::uint64_t schoof_mod_ell(const Weierstrass& E, std::uint64_t ell);
// Same with E given over Q by integer a-invariants and p arbitrary.
std::uint64_t schoof_mod_ell(const std::array<Integer, 5>& a, const Integer& p, std::uint64_t ell);

std::string serialize_iota(const IotaPolynomial& I);
IotaPolynomial parse_iota(const HeckeEigenSystem& sys, const std::string& text);
std::string serialize_gamma(const FrobeniusClassData& D);
FrobeniusClassData parse_gamma(const HeckeEigenSystem& sys, const std::string& text);

}  // namespace x1

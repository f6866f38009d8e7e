#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "x1/elliptic.hpp"
#include "x1/gf.hpp"

namespace x1 {

// Sparse polynomial in two named variables with rational coefficients.
class BiPoly {
 public:
  using Terms = std::map<std::pair<int, int>, Rational>;

  BiPoly() = default;
  explicit BiPoly(Terms t);
  // Sums of terms such as "-3/2*x^2*y + x - 1" in the variables v0, v1.
  static BiPoly parse(std::string_view text, char v0, char v1);
  std::string to_string(char v0, char v1) const;

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int degree_in(int var) const;
  Gf eval(const Gf& a, const Gf& b) const;
  // Substitute v0 = a; the result is a polynomial in v1.
  GfPoly in_second(const Gf& a) const;
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.t_ == b.t_; }

 private:
  Terms t_;
};

struct RationalMap {
  BiPoly num, den;
  // Throws "pole" when the denominator vanishes.
  Gf eval(const Gf& a, const Gf& b) const;
};

enum class ModelKind { hyperelliptic, plane };

// Affine point of a model over some finite field.
struct CurvePoint {
  Gf x, y;
  friend bool operator==(const CurvePoint& a, const CurvePoint& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator<(const CurvePoint& a, const CurvePoint& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  }
};

// Curated model of X_1(n). Hyperelliptic models are y^2 + h(x) y = f(x) with
// deg f < deg h = g + 1: two rational points at infinity, inf+ where y ~ -h and
// inf- where y ~ f/h. Plane models only support counting.
class CurveModel {
 public:
  static CurveModel load(std::string_view text);
  static CurveModel load_file(const std::string& path);
  // data/x1_<n>.model
  static CurveModel bundled(unsigned n);
  std::string save() const;

  unsigned level = 0;
  unsigned genus = 0;
  ModelKind kind = ModelKind::hyperelliptic;
  ZPoly h, f;        // hyperelliptic
  BiPoly equation;   // plane
  RationalMap b, c;  // model coordinates -> Tate parameters
  RationalMap x_of, y_of;  // Tate parameters -> model coordinates
  std::string origin;      // "inf+" or "none"
  std::string psi;         // "y" or "none"
  unsigned rational_cusps = 0;
  ZPoly cusp_orbit;  // minimal polynomial whose roots index the remaining cusps
  std::vector<std::uint64_t> bad_primes;
  std::vector<std::pair<Integer, Integer>> rational_cusp_points;  // affine cusps defined over Q
  Integer rational_torsion;  // exponent of J(Q)_tors when known, else 0

  bool is_good(std::uint64_t p) const;
  bool has_jacobian() const { return kind == ModelKind::hyperelliptic && origin == "inf+"; }
  bool on_curve(const CurvePoint& P) const;
  bool is_rational_cusp(const CurvePoint& P) const;
  GfPoly h_over(const GaloisField* F) const { return reduce_poly(h, F); }
  GfPoly f_over(const GaloisField* F) const { return reduce_poly(f, F); }

 private:
  void validate() const;
};

// (b, c) with (0, 0) of exact order n on E_{b,c}; throws "cusp" on cusps and
// "model-bug" when the order check fails.
std::pair<Gf, Gf> point_to_moduli(const CurveModel& M, const CurvePoint& P);
CurvePoint moduli_to_point(const CurveModel& M, const Gf& b, const Gf& c);

// T_m of a point as a formal sum of m + 1 points over an extension. `embedding`
// maps the field of the input point into `field`.
struct HeckeImage {
  const GaloisField* field = nullptr;
  Embedding embedding;
  std::vector<CurvePoint> points;
};
HeckeImage hecke_image_point(const CurveModel& M, const CurvePoint& P, unsigned m);

// The point of (E, dP).
CurvePoint diamond_operator(const CurveModel& M, const CurvePoint& P, long d);

// #X(F_{p^i}) by enumeration; throws "work-bound" when p^i exceeds the bound.
Integer count_points_naive(const CurveModel& M, std::uint64_t p, unsigned i,
                           const Integer& work_bound = Integer(100000000));

struct ZetaData {
  Integer p;
  unsigned genus = 0;
  std::vector<Integer> counts;  // #X(F_{p^i}), i = 1..genus
  ZPoly numerator;              // prod (t - alpha_i), degree 2g

  // #X(F_{p^d}) and #J(F_{p^d}) from the roots.
  Integer curve_count(unsigned d) const;
  Integer jacobian_order(unsigned d = 1) const;
  // prod (t - alpha_i^d)
  ZPoly numerator_power(unsigned d) const;
};

ZetaData zeta_from_counts(const std::vector<Integer>& counts, const Integer& p);
ZetaData zeta_naive(const CurveModel& M, std::uint64_t p);

}  // namespace x1

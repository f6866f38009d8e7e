#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "x1/curve_model.hpp"
#include "x1/modsym.hpp"

namespace x1 {

// Class of D(u, v) + a inf+ + b inf- (degree 0) on y^2 + h y = f with
// deg h = g + 1 > deg f. Canonical form: deg u <= g, deg v < deg u, b >= 0,
// a >= -g, so that D(u, v) + (a + g) inf+ + b inf- is effective of degree g.
// This representative is unique except for the canonical class [inf- - inf+].
struct MumfordDivisor {
  GfPoly u, v;
  int a = 0, b = 0;

  bool is_identity() const { return u.degree() == 0 && a == 0 && b == 0; }
  friend bool operator==(const MumfordDivisor& x, const MumfordDivisor& y) {
    return x.u == y.u && x.v == y.v && x.a == y.a && x.b == y.b;
  }
  friend bool operator!=(const MumfordDivisor& x, const MumfordDivisor& y) { return !(x == y); }
  friend bool operator<(const MumfordDivisor& x, const MumfordDivisor& y);
};

class Jacobian {
 public:
  Jacobian(const CurveModel& M, const GaloisField* F);

  const CurveModel& model() const { return *M_; }
  const GaloisField* field() const { return F_; }
  unsigned genus() const { return g_; }
  const GfPoly& h() const { return h_; }
  const GfPoly& f() const { return f_; }

  MumfordDivisor identity() const;
  MumfordDivisor add(const MumfordDivisor& x, const MumfordDivisor& y) const;
  MumfordDivisor neg(const MumfordDivisor& x) const;
  MumfordDivisor sub(const MumfordDivisor& x, const MumfordDivisor& y) const { return add(x, neg(y)); }
  MumfordDivisor mul(const MumfordDivisor& x, const Integer& k) const;
  // Reduces D(u, v) + a inf+ + b inf- with v^2 + h v = f mod u.
  MumfordDivisor reduce(GfPoly u, GfPoly v, int a, int b) const;

  // [Q - inf+] and [inf- - inf+].
  MumfordDivisor from_point(const CurvePoint& Q) const;
  MumfordDivisor inf_minus() const;
  // Sum of g random places of degree 1, reduced; deterministic in rng.
  MumfordDivisor random_point(std::mt19937_64& rng) const;
  bool is_valid(const MumfordDivisor& x) const;

  // x -> x^(p^times) coefficientwise.
  MumfordDivisor frobenius(const MumfordDivisor& x, unsigned times) const;
  // Image in the Jacobian over e's target field.
  MumfordDivisor map(const MumfordDivisor& x, const Embedding& e) const;
  // Preimage under e (this Jacobian lives over e's source), or nullopt if some
  // coefficient is not in the image.
  std::optional<MumfordDivisor> descend(const MumfordDivisor& x, const Embedding& e) const;

  // Stability theta(x) = -a and iota(x) = sum of psi = y over the affine part
  // (psi(inf-) = 0). Throws "bad-evaluation-point" on the canonical class.
  int theta(const MumfordDivisor& x) const { return -x.a; }
  Gf iota(const MumfordDivisor& x) const;

  std::string to_string(const MumfordDivisor& x) const;
  MumfordDivisor parse(const std::string& s) const;

 private:
  const CurveModel* M_;
  const GaloisField* F_;
  unsigned g_;
  GfPoly h_, f_;
  int e_minus_;  // deg h - deg f
};

// Zeta numerator of the model at p: naive counts when p^g is small, else the
// Eichler-Shimura relation on modular symbols.
ZPoly frobenius_numerator(const CurveModel& M, std::uint64_t p);
// #J(F_{p^d}).
Integer jacobian_order(const CurveModel& M, std::uint64_t p, unsigned d);

// T_k (k = 2, 3) on an ell-torsion class, through the moduli correspondence on
// places. Cuspidal contributions are rational and killed by the exponent of
// J(Q)_tors, so the result is scaled by m = 0 mod that exponent, 1 mod ell.
MumfordDivisor hecke_on_torsion(const Jacobian& J, const MumfordDivisor& x, unsigned k, std::uint64_t ell,
                                std::mt19937_64& rng);
// Same, on a class of any order; exact only up to rational cuspidal classes.
std::optional<MumfordDivisor> hecke_naive(const Jacobian& J, const MumfordDivisor& x, unsigned k);

struct DefinitionField {
  unsigned degree = 0;  // order of X in F[X]/(X^2 - a_p X + chi(p) p), 0 if X is not a unit
  bool order_ok = false;  // degree <= |F^x|
  GfPoly F;
};
DefinitionField definition_field(const HeckeEigenSystem& sys, std::uint64_t p);

// Basis of J_1(n)[m] mod p over F_q, q = p^d, with the T_k action.
struct TorsionBasis {
  const HeckeEigenSystem* sys = nullptr;
  std::uint64_t p = 0;
  const GaloisField* field = nullptr;
  MumfordDivisor P1, P2;
  std::map<unsigned, std::array<std::uint64_t, 4>> action;  // T_k matrix in the basis, row-major indices
  // x P1 + y P2 for x, y in F_ell, indexed by x * ell + y.
  std::vector<MumfordDivisor> span;

  // (x, y) with x P1 + y P2 == D, or nullopt.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> coordinates(const MumfordDivisor& D) const;
};

// Step 3: a point of exact order ell in J(F_q).
MumfordDivisor ell_torsion_point(const Jacobian& J, const Integer& order, std::uint64_t ell, std::mt19937_64& rng);

// F_ell-basis of J(F_q)[ell], from a direct-sum basis of the ell-Sylow subgroup.
std::vector<MumfordDivisor> ell_torsion_basis(const Jacobian& J, const Integer& order, std::uint64_t ell,
                                             std::mt19937_64& rng);

TorsionBasis jm_basis(const CurveModel& M, const HeckeEigenSystem& sys, std::uint64_t p, std::uint64_t seed);
// Matrix of Frob_p on (P1, P2), row-major indices over F_ell: Frob(P_j) = sum_i m[i][j] P_i.
std::array<std::uint64_t, 4> frobenius_matrix_direct(const CurveModel& M, const TorsionBasis& B);

std::string serialize_basis(const CurveModel& M, const TorsionBasis& B);
TorsionBasis parse_basis(const CurveModel& M, const HeckeEigenSystem& sys, const std::string& text);

}  // namespace x1

#pragma once

#include <optional>
#include <vector>

#include "x1/matrix.hpp"
#include "x1/poly.hpp"

namespace x1 {

// Exact integral LLL on the rows of `basis`. `transform`, when given, receives
// the unimodular U with U * basis = result.
ZMatrix lll_reduce(const ZMatrix& basis, const Rational& delta = Rational(99, 100),
                   ZMatrix* transform = nullptr);

struct ModularFactor {
  Integer modulus;
  ZPoly factor;  // monic, coefficients in [0, modulus)
};

struct ReconstructionInstance {
  int degree = 2;
  std::vector<ModularFactor> factors;
  Integer height = 1;
};

struct Sufficiency {
  double lhs = 0;  // sum a_i log N_i
  double rhs = 0;  // log of the right-hand side
  bool ok() const { return lhs > rhs; }
};

// Log-scale right side (m+1) log((2m)!) + m(m+1) log H + m^2(m+1)/4 log 2.
double sufficiency_threshold(int m, const Integer& height);
// d log(d+1) + 2d log H + d^2/2 log 2: beyond this every lattice vector within the
// LLL approximation factor of P has a resultant with P divisible by the index, so
// the reduced basis starts with P when P is irreducible.
double resultant_threshold(int d, const Integer& height);
// Maximum of both thresholds, the first taken with m = ceil(d/2).
Sufficiency check_sufficiency(const ReconstructionInstance& inst);

// Basis rows of {Q in Z[X], deg Q <= d : A_i | Q mod N_i for all i}.
ZMatrix factor_lattice(const std::vector<ModularFactor>& factors, int degree);

// The monic degree-d polynomial of height <= H compatible with every factor.
ZPoly reconstruct_charpoly(const ReconstructionInstance& inst);

struct PrimeBudget {
  unsigned n = 0;
  Integer p;
  Integer formula;  // ceil(2 L log L), L = n^6 log p
  Integer x;        // formula, or the override
  bool overridden = false;
};

PrimeBudget prime_budget(unsigned n, const Integer& p, std::optional<Integer> override_x = {});

}  // namespace x1

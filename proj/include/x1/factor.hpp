#pragma once

#include <random>
#include <utility>
#include <vector>

#include "x1/gf.hpp"

namespace x1 {

struct Factor {
  GfPoly poly;  // monic irreducible
  int multiplicity;
};

// Squarefree decomposition: pairs (squarefree monic g_i, i) with f = lead * prod g_i^i.
std::vector<std::pair<GfPoly, int>> squarefree_decomposition(const GfPoly& f);
// f squarefree monic -> pairs (product of all irreducible factors of degree d, d).
std::vector<std::pair<GfPoly, int>> distinct_degree(const GfPoly& f);
// f squarefree monic, all factors of degree d -> the factors.
std::vector<GfPoly> equal_degree(const GfPoly& f, int d, std::mt19937_64& rng);

// Full factorization over the coefficient field, factors sorted by (degree, coefficients).
std::vector<Factor> poly_factor_ff(const GfPoly& f);
// Distinct roots in the coefficient field, sorted by index.
std::vector<Gf> roots(const GfPoly& f);
bool is_squarefree(const GfPoly& f);

// Minimal polynomial over F_p of an element.
GfPoly minimal_polynomial_prime(const Gf& a);

// Hensel/Newton lifting of the simple roots of f mod r to Z/r^k.
std::vector<Integer> hensel_lift_roots(const ZPoly& f, std::uint64_t r, unsigned k);

// Monic polynomial from its roots.
GfPoly from_roots(const std::vector<Gf>& rts);

}  // namespace x1

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "x1/cache.hpp"
#include "x1/galois.hpp"
#include "x1/lattice.hpp"

namespace x1 {

struct PipelineConfig {
  Cache cache;
  std::uint64_t seed = 1;
  PiotaOptions piota;
  GammaOptions gamma;
  // auto | direct | large-p | hecke
  std::string route = "auto";
  std::optional<Integer> height;  // P_f height bound; default weil_height
  std::function<void(const std::string&)> log;
};

// The heavy global artifacts, through the cache.
IotaPolynomial cached_piota(const CurveModel& M, const HeckeEigenSystem& sys, const PipelineConfig& cfg);
FrobeniusClassData cached_gamma(const IotaPolynomial& iota, const PipelineConfig& cfg);

// max_k binom(d, k) ceil(p^(k/2)): coefficients of a degree-d polynomial
// whose roots all have absolute value sqrt(p).
Integer weil_height(int d, const Integer& p);

// prod over Gal(F / F_ell) of the conjugates of R, descended to F_ell.
GfPoly conjugate_product(const GfPoly& R, std::uint64_t ell);

struct FactorRecord {
  std::string system;  // HeckeEigenSystem::describe()
  std::uint64_t ell = 0;
  std::string route;  // direct | large-p | hecke
  Mat2 frobenius{};  // class representative (direct, large-p)
  GfPoly R;          // t^2 - trace t + det over F
  GfPoly A;          // conjugate_product(R), over F_ell
};

// R_p(t) for one eigen-system at p by the configured route.
FactorRecord frobenius_factor(const CurveModel& M, const HeckeEigenSystem& sys, const Integer& p,
                              const PipelineConfig& cfg);

struct ModularFactorSet {
  std::vector<FactorRecord> records;
  // One (ell, product of the A's at ell) per ell, for the lattice.
  std::vector<ModularFactor> by_ell() const;
};

// P_f of degree `degree` and height <= H from the records, validated against
// them and against t^d P(p / t) = p^(d/2) P(t).
ZPoly charpoly_f(const ModularFactorSet& factors, int degree, const Integer& height, const Integer& p);

struct CountResult {
  unsigned n = 0;
  Integer p;
  std::string mode;  // exact | mod-ell
  std::uint64_t ell = 0;
  ZPoly P;           // exact
  GfPoly P_mod;      // mod-ell
  Integer points, jacobian;  // integers, or residues mod ell
  ModularFactorSet factors;

  std::string to_text() const;
};

// mod-ell: P_n mod ell from every eigen-system mod ell. exact: P_n from
// records over as many ell as the lattice needs.
CountResult count_points(const CurveModel& M, const Integer& p, const std::string& mode, std::uint64_t ell,
                         const PipelineConfig& cfg);

}  // namespace x1

#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "x1/factor.hpp"
#include "x1/matrix.hpp"

namespace x1 {

// Weight-2 modular symbols for Gamma_1(n), n prime, in the Manin presentation.
// Symbols [c, d] with (c, d) != (0, 0) mod n; relations x + xS = 0 and
// x + x tau + x tau^2 = 0. The ambient lattice is spanned by the images of the
// symbols; matrices act on row vectors from the right.
class ModularSymbolSpace {
 public:
  static std::shared_ptr<const ModularSymbolSpace> build(unsigned n);

  unsigned level() const { return n_; }
  unsigned genus() const { return (n_ - 5) * (n_ - 7) / 24; }
  std::size_t dimension() const { return cusp_basis_.rows(); }  // 2g
  std::size_t ambient_dimension() const { return ambient_dim_; }

  // Image of [c, d] in ambient coordinates, sparse (index, coefficient).
  const std::vector<std::pair<int, int>>& symbol_vector(long c, long d) const;
  // Ambient basis element j is the symbol free_symbols()[j].
  const std::vector<std::pair<int, int>>& free_symbols() const { return free_; }
  // Rows span the cuspidal sublattice (ambient coordinates).
  const ZMatrix& cuspidal_basis() const { return cusp_basis_; }
  // Boundary map on ambient coordinates into the n-1 cusp classes.
  const ZMatrix& boundary_matrix() const { return boundary_; }

  // T_k on the cuspidal lattice; integral. Memoized.
  ZMatrix hecke_matrix(unsigned k) const;
  // <d> on the cuspidal lattice.
  ZMatrix diamond_matrix(long d) const;
  // T_k on the ambient lattice.
  ZMatrix ambient_hecke(unsigned k) const;

  // Coordinate `coord` of T_k applied to sum_j v[j] e_j, with v over a finite
  // field given in ambient coordinates.
  Gf hecke_coordinate(unsigned k, const std::vector<Gf>& v, std::size_t coord) const;

  // Convert an ambient integer vector lying in the cuspidal lattice into
  // cuspidal coordinates.
  std::vector<Integer> to_cuspidal(const std::vector<Integer>& ambient) const;

 private:
  explicit ModularSymbolSpace(unsigned n);
  std::vector<std::pair<int, int>> hecke_image(long c, long d, unsigned k) const;
  std::vector<Integer> ambient_image(unsigned k, std::size_t j) const;

  unsigned n_;
  std::size_t ambient_dim_ = 0;
  std::vector<std::vector<std::pair<int, int>>> vec_;  // indexed by c*n + d
  std::vector<std::pair<int, int>> free_;
  ZMatrix boundary_;
  ZMatrix cusp_basis_;
  std::vector<std::size_t> cusp_pivots_;  // columns making cusp_basis_ invertible
  QMatrix cusp_pivot_inverse_;
  mutable std::mutex mu_;
  mutable std::map<unsigned, ZMatrix> hecke_cache_;
};

// Matrices [a b; c d] of determinant k with a > b >= 0, d > c >= 0.
std::vector<std::array<long, 4>> merel_set(unsigned k);
// Heilbronn matrices of determinant p (Cremona), p prime.
std::vector<std::array<long, 4>> heilbronn_cremona(unsigned p);

// Characteristic polynomial over Z of T_k on S_2(Gamma_1(n)): the square root of
// the characteristic polynomial on the cuspidal symbols.
ZPoly hecke_charpoly(const ModularSymbolSpace& M, unsigned k);

struct ProjectorData {
  unsigned k = 0;
  ZPoly A;       // integral charpoly of T_k on S_2
  GfPoly B;      // A / (X - a_k)^e over the residue field
  int e = 0;
};

struct HeckeEigenSystem {
  unsigned level = 0;
  std::uint64_t ell = 0;
  const GaloisField* field = nullptr;  // generated by the eigenvalues
  std::vector<Gf> a;                   // a[k] for 1 <= k <= K; a[0] unused
  std::vector<Gf> chi;                 // chi[m] for 0 <= m < n; chi[m] = 0 when n | m
  std::vector<unsigned> optimal;       // the set S
  std::vector<ProjectorData> projectors;
  std::size_t subspace_dim = 0;        // dimension of the generalized eigenspace mod ell
  std::vector<Gf> eigenvector;         // ambient coordinates over `field`
  std::size_t probe = 0;               // ambient coordinate with eigenvector[probe] != 0
  std::shared_ptr<const ModularSymbolSpace> space;

  unsigned residue_degree() const { return field->degree(); }
  std::size_t bound() const { return a.size() - 1; }
  // a_k for any k >= 1, extending by Hecke recursion or direct evaluation.
  Gf eigenvalue(std::uint64_t k) const;
  Gf character(std::int64_t m) const;
  // Eigenvalues at 2..K of a Galois conjugate, as indices.
  std::string describe() const;
};

// One system per Galois orbit of eigenvalue systems mod ell, ordered by the
// index tuple (a_2, a_3, ...) of a canonical conjugate.
std::vector<HeckeEigenSystem> eigen_systems_mod_ell(std::shared_ptr<const ModularSymbolSpace> M,
                                                    std::uint64_t ell);

// chi table from chi(q) = (a_q^2 - a_{q^2})/q at a prime primitive root q.
std::vector<Gf> character_values(const HeckeEigenSystem& sys);

// Smallest-product subset of [2, n] separating sys from all other systems and
// from its own nontrivial conjugates.
std::vector<unsigned> optimal_set(const HeckeEigenSystem& sys,
                                  const std::vector<HeckeEigenSystem>& all);

ProjectorData projector_data(const HeckeEigenSystem& sys, unsigned k);

// Text record: level, ell, field, eigenvalues, chi, S, projectors.
std::string export_system(const HeckeEigenSystem& sys);

}  // namespace x1

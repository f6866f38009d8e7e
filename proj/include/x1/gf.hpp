#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "x1/integer.hpp"
#include "x1/poly.hpp"

namespace x1 {

class Gf;

// F_{p^k} = F_p[t]/(modulus), p < 2^31. Fields are interned and never freed, so
// elements may hold a plain pointer to their field.
class GaloisField {
 public:
  static const GaloisField* get(std::uint64_t p, unsigned k);
  static const GaloisField* with_modulus(std::uint64_t p, const std::vector<std::uint64_t>& modulus);

  std::uint64_t characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  // Monic, coefficients of t^0..t^k.
  const std::vector<std::uint64_t>& modulus() const { return mod_; }
  const Integer& order() const { return q_; }
  bool is_prime_field() const { return k_ == 1; }

  Gf zero() const;
  Gf one() const;
  Gf gen() const;  // the class of t
  Gf from_int(std::int64_t a) const;
  Gf from_integer(const Integer& a) const;
  Gf from_coeffs(const std::vector<std::uint64_t>& c) const;
  Gf random(std::mt19937_64& rng) const;
  // Enumerates elements by index in [0, q).
  Gf element_at(std::uint64_t index) const;

  std::string describe() const;  // "p^k [modulus coefficients]"

  // t^(p^i) images used by the Frobenius: row i holds (t^j)^p for j < k.
  const std::vector<std::vector<std::uint64_t>>& frobenius_table() const { return frob_; }

 private:
  GaloisField(std::uint64_t p, std::vector<std::uint64_t> mod);
  void build_frobenius();

  std::uint64_t p_;
  unsigned k_;
  std::vector<std::uint64_t> mod_;
  Integer q_;
  std::vector<std::vector<std::uint64_t>> frob_;

  friend class Gf;
};

class Gf {
 public:
  using Coeffs = boost::container::small_vector<std::uint32_t, 12>;

  Gf() = default;
  Gf(const GaloisField* F, Coeffs c) : F_(F), c_(std::move(c)) {}

  const GaloisField* field() const { return F_; }
  const Coeffs& coeffs() const { return c_; }
  std::uint64_t p() const { return F_->p_; }

  bool is_zero() const;
  bool is_one() const;
  bool in_prime_field() const;
  std::uint64_t to_u64() const;  // requires in_prime_field()

  Gf& operator+=(const Gf& o);
  Gf& operator-=(const Gf& o);
  Gf& operator*=(const Gf& o);
  Gf& operator/=(const Gf& o) { return *this *= o.inv(); }
  friend Gf operator+(Gf a, const Gf& b) { return a += b; }
  friend Gf operator-(Gf a, const Gf& b) { return a -= b; }
  friend Gf operator*(Gf a, const Gf& b) { return a *= b; }
  friend Gf operator/(Gf a, const Gf& b) { return a /= b; }
  Gf operator-() const;
  friend bool operator==(const Gf& a, const Gf& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Gf& a, const Gf& b) { return !(a == b); }
  friend bool operator<(const Gf& a, const Gf& b) { return a.index() < b.index(); }

  Gf scaled(std::uint64_t s) const;
  Gf inv() const;
  Gf pow(const Integer& e) const;
  Gf pow(std::uint64_t e) const;
  Gf frobenius(unsigned times = 1) const;  // x -> x^(p^times)
  Gf norm() const;                          // to F_p
  Gf trace() const;                         // to F_p
  bool is_square() const;
  // Some square root, or throws if none.
  Gf sqrt() const;
  // Multiplicative order (element must be nonzero).
  Integer order() const;
  // Position in the canonical enumeration (coefficients read base p).
  std::uint64_t index() const;

  std::string to_string() const;

 private:
  const GaloisField* F_ = nullptr;
  Coeffs c_;
};

inline bool is_zero(const Gf& a) { return a.is_zero(); }
inline bool is_one(const Gf& a) { return a.is_one(); }
inline Gf zero_like(const Gf& a) { return a.field()->zero(); }
inline Gf one_like(const Gf& a) { return a.field()->one(); }
inline Gf inverse(const Gf& a) { return a.inv(); }
inline std::string to_string(const Gf& a) { return a.to_string(); }

using GfPoly = Poly<Gf>;

GfPoly gfpoly(const GaloisField* F, const std::vector<std::int64_t>& c);
GfPoly reduce_poly(const ZPoly& f, const GaloisField* F);
GfPoly reduce_poly(const QPoly& f, const GaloisField* F);  // denominators must be units
GfPoly frobenius_poly(const GfPoly& f, unsigned times = 1);
// Lifts a polynomial with prime-field coefficients to Z in [0, p).
ZPoly lift_poly(const GfPoly& f);

// Embedding F_{p^a} -> F_{p^b}, a | b, fixed by the image of the generator.
class Embedding {
 public:
  Embedding() = default;
  Embedding(const GaloisField* src, const GaloisField* dst, Gf image);
  // Any embedding; deterministic (smallest root of the source modulus).
  static Embedding find(const GaloisField* src, const GaloisField* dst);
  static Embedding identity(const GaloisField* F);

  const GaloisField* source() const { return src_; }
  const GaloisField* target() const { return dst_; }
  const Gf& image_of_generator() const { return image_; }

  Gf map(const Gf& a) const;
  GfPoly map(const GfPoly& f) const;
  // Preimage, or throws if a is not in the image.
  Gf preimage(const Gf& a) const;
  bool in_image(const Gf& a) const;
  // this: A -> B, next: B -> C gives A -> C.
  Embedding then(const Embedding& next) const;

 private:
  void build_inverse();

  const GaloisField* src_ = nullptr;
  const GaloisField* dst_ = nullptr;
  Gf image_;
  std::vector<Gf> powers_;  // image^i
  // Row reduction data for preimages: pivots over the basis coefficients.
  std::vector<std::vector<std::uint64_t>> solve_rows_;
  std::vector<int> pivot_col_;
};

// Irreducibility over F_p of a monic polynomial with coefficients in [0, p).
bool is_irreducible_prime_field(const std::vector<std::uint64_t>& f, std::uint64_t p);

}  // namespace x1

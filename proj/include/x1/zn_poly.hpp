#pragma once

#include <utility>
#include <vector>

#include "x1/integer.hpp"

namespace x1 {

// Polynomials over Z/NZ with arbitrary-size N. Coefficients are kept in [0, N),
// constant term first, no trailing zeros.
using ZnVec = std::vector<Integer>;

void zn_trim(ZnVec& a);
ZnVec zn_reduce(const std::vector<Integer>& a, const Integer& N);
int zn_degree(const ZnVec& a);  // -1 for zero
ZnVec zn_add(const ZnVec& a, const ZnVec& b, const Integer& N);
ZnVec zn_sub(const ZnVec& a, const ZnVec& b, const Integer& N);
ZnVec zn_scale(const ZnVec& a, const Integer& s, const Integer& N);
// Kronecker substitution: one big-integer product.
ZnVec zn_mul(const ZnVec& a, const ZnVec& b, const Integer& N);
ZnVec zn_mul_schoolbook(const ZnVec& a, const ZnVec& b, const Integer& N);
Integer zn_eval(const ZnVec& a, const Integer& x, const Integer& N);
ZnVec zn_derivative(const ZnVec& a, const Integer& N);

// Division by b with invertible leading coefficient; throws "not-invertible"
// carrying the offending value when N is composite and it is not.
std::pair<ZnVec, ZnVec> zn_divrem(const ZnVec& a, const ZnVec& b, const Integer& N);
// Monic gcd; N must be prime (or the computation meets only units).
ZnVec zn_gcd(ZnVec a, ZnVec b, const Integer& N);
// a^-1 mod m, or throws "not-invertible" when gcd(a, m) != 1.
ZnVec zn_invmod(const ZnVec& a, const ZnVec& m, const Integer& N);

// Fixed monic modulus with a precomputed reversed inverse (Barrett-style
// remainder via two products).
class ZnModulus {
 public:
  ZnModulus() = default;
  ZnModulus(Integer N, ZnVec m);

  const Integer& N() const { return N_; }
  const ZnVec& poly() const { return m_; }
  int degree() const { return static_cast<int>(m_.size()) - 1; }

  ZnVec reduce(ZnVec a) const;
  ZnVec mul(const ZnVec& a, const ZnVec& b) const { return reduce(zn_mul(a, b, N_)); }
  ZnVec pow(const ZnVec& a, const Integer& e) const;
  ZnVec x_power(const Integer& e) const;
  // Composition a(b) mod m.
  ZnVec compose(const ZnVec& a, const ZnVec& b) const;

 private:
  Integer N_;
  ZnVec m_;
  ZnVec inv_rev_;  // 1 / reverse(m) mod X^(deg m)
};

// Power sums s_k = sum of roots^k of a monic f for k = 0..K (Newton identities).
ZnVec zn_power_sums(const ZnVec& f, int K, const Integer& N);

}  // namespace x1

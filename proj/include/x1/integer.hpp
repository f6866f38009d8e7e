#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace x1 {

using Integer = mpz_class;
using Rational = mpq_class;

// Errors carry a short machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct Residue {
  Integer value;
  Integer modulus;
};

// Returns (v, M) with M the product of the moduli and 0 <= v < M.
std::pair<Integer, Integer> crt_combine(const std::vector<Residue>& residues);

// a/b with |a| <= num_bound, 0 < b <= den_bound, a = v*b mod M.
std::optional<Rational> rational_reconstruct(const Integer& v, const Integer& M,
                                             const Integer& num_bound,
                                             const Integer& den_bound);
std::optional<Rational> rational_reconstruct(const Integer& v, const Integer& M,
                                             const Integer& bound);
std::optional<Rational> rational_reconstruct(const Integer& v, const Integer& M);

// Accepts decimal integers combined with ^, *, +, - (e.g. "10^1000+1357").
Integer parse_integer(std::string_view text);

Integer mod(const Integer& a, const Integer& m);
Integer pow(const Integer& base, unsigned long e);
Integer powmod(const Integer& base, const Integer& e, const Integer& m);
Integer invmod(const Integer& a, const Integer& m);
Integer isqrt(const Integer& a);
bool is_prime(const Integer& n);
bool is_prime(std::uint64_t n);
std::uint64_t next_prime(std::uint64_t n);  // smallest prime > n
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);
std::vector<std::pair<std::uint64_t, int>> factor_small(std::uint64_t n);
double log_abs(const Integer& a);  // natural log of |a|, a != 0
std::uint64_t to_u64(const Integer& a);
Integer from_u64(std::uint64_t v);
int valuation(Integer a, const Integer& p);

// Arithmetic in Z/p for p < 2^32.
inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return (a * b) % p;
}
inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}
inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p);
int legendre(std::uint64_t a, std::uint64_t p);
std::uint64_t reduce_i64(std::int64_t a, std::uint64_t p);
std::uint64_t reduce(const Integer& a, std::uint64_t p);
// Symmetric representative in (-p/2, p/2].
std::int64_t centered(std::uint64_t a, std::uint64_t p);

}  // namespace x1

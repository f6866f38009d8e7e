#include "x1/integer.hpp"

#include <cctype>
#include <cmath>

namespace x1 {

Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Integer powmod(const Integer& base, const Integer& e, const Integer& m) {
  Integer r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer invmod(const Integer& a, const Integer& m) {
  Integer r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
    throw Error("not-invertible", "element " + a.get_str() + " not invertible mod " + m.get_str());
  return r;
}

Integer isqrt(const Integer& a) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

bool is_prime(const Integer& n) { return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0; }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % d == 0) return n == d;
  }
  if (n < 1369) return true;
  return is_prime(from_u64(n));
}

std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

std::vector<std::pair<std::uint64_t, int>> factor_small(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    int e = 0;
    while (n % d == 0) n /= d, ++e;
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

double log_abs(const Integer& a) {
  long exp = 0;
  double m = mpz_get_d_2exp(&exp, a.get_mpz_t());
  return std::log(std::fabs(m)) + static_cast<double>(exp) * std::log(2.0);
}

std::uint64_t to_u64(const Integer& a) {
  if (a < 0 || mpz_sizeinbase(a.get_mpz_t(), 2) > 64)
    throw Error("range", "integer does not fit in 64 bits: " + a.get_str());
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, a.get_mpz_t());
  return v;
}

Integer from_u64(std::uint64_t v) {
  Integer r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

int valuation(Integer a, const Integer& p) {
  if (a == 0) throw Error("domain", "valuation of zero");
  int v = 0;
  while (mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t())) {
    a /= p;
    ++v;
  }
  return v;
}

std::pair<Integer, Integer> crt_combine(const std::vector<Residue>& residues) {
  for (std::size_t i = 0; i < residues.size(); ++i)
    for (std::size_t j = i + 1; j < residues.size(); ++j) {
      Integer g = gcd(residues[i].modulus, residues[j].modulus);
      if (g != 1)
        throw Error("non-coprime", "moduli " + residues[i].modulus.get_str() + " and " +
                                       residues[j].modulus.get_str() + " share factor " +
                                       g.get_str());
    }
  Integer v = 0, M = 1;
  for (const auto& r : residues) {
    if (r.modulus < 1) throw Error("domain", "modulus must be positive");
    // v + M*t = r.value mod r.modulus
    Integer t = mod((r.value - v) * invmod(mod(M, r.modulus), r.modulus), r.modulus);
    if (r.modulus == 1) t = 0;
    v += M * t;
    M *= r.modulus;
  }
  return {mod(v, M), M};
}

std::optional<Rational> rational_reconstruct(const Integer& v, const Integer& M,
                                             const Integer& num_bound,
                                             const Integer& den_bound) {
  Integer r0 = M, r1 = mod(v, M);
  Integer t0 = 0, t1 = 1;
  while (r1 > num_bound) {
    Integer q = r0 / r1;
    Integer r2 = r0 - q * r1;
    Integer t2 = t0 - q * t1;
    r0 = r1, r1 = r2, t0 = t1, t1 = t2;
  }
  if (t1 == 0) return std::nullopt;
  Integer a = r1, b = t1;
  if (b < 0) a = -a, b = -b;
  if (b > den_bound || gcd(b, M) != 1) return std::nullopt;
  if (mod(a - v * b, M) != 0) return std::nullopt;
  Rational q(a, b);
  q.canonicalize();
  return q;
}

std::optional<Rational> rational_reconstruct(const Integer& v, const Integer& M,
                                             const Integer& bound) {
  return rational_reconstruct(v, M, bound, bound);
}

std::optional<Rational> rational_reconstruct(const Integer& v, const Integer& M) {
  Integer b = isqrt(M / 2);
  return rational_reconstruct(v, M, b, b);
}

namespace {

struct ExprParser {
  std::string_view s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  Integer number() {
    skip();
    if (i < s.size() && s[i] == '(') {
      ++i;
      Integer v = sum();
      skip();
      if (i >= s.size() || s[i] != ')') fail();
      ++i;
      return v;
    }
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) fail();
    return Integer(std::string(s.substr(start, i - start)));
  }
  Integer power() {
    Integer b = number();
    skip();
    if (i < s.size() && s[i] == '^') {
      ++i;
      Integer e = power();
      if (e < 0 || e > 1000000) fail();
      return x1::pow(b, e.get_ui());
    }
    return b;
  }
  Integer product() {
    Integer v = power();
    for (;;) {
      skip();
      if (i < s.size() && s[i] == '*') {
        ++i;
        v *= power();
      } else {
        return v;
      }
    }
  }
  Integer sum() {
    skip();
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    Integer v = product();
    if (neg) v = -v;
    for (;;) {
      skip();
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        char op = s[i++];
        Integer w = product();
        v = op == '+' ? Integer(v + w) : Integer(v - w);
      } else {
        return v;
      }
    }
  }
  [[noreturn]] void fail() {
    throw Error("parse", "cannot parse integer expression '" + std::string(s) + "'");
  }
};

}  // namespace

Integer parse_integer(std::string_view text) {
  ExprParser p{text};
  Integer v = p.sum();
  p.skip();
  if (p.i != text.size()) p.fail();
  return v;
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p) {
  std::int64_t t0 = 0, t1 = 1;
  std::int64_t r0 = static_cast<std::int64_t>(p), r1 = static_cast<std::int64_t>(a % p);
  while (r1) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    r0 = r1, r1 = r2;
    std::int64_t t2 = t0 - q * t1;
    t0 = t1, t1 = t2;
  }
  if (r0 != 1) throw Error("not-invertible", std::to_string(a) + " mod " + std::to_string(p));
  return reduce_i64(t0, p);
}

int legendre(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return 1;
  return powmod_u64(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::uint64_t reduce_i64(std::int64_t a, std::uint64_t p) {
  std::int64_t r = a % static_cast<std::int64_t>(p);
  if (r < 0) r += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(r);
}

std::uint64_t reduce(const Integer& a, std::uint64_t p) {
  return mpz_fdiv_ui(a.get_mpz_t(), p);
}

std::int64_t centered(std::uint64_t a, std::uint64_t p) {
  return a > p / 2 ? static_cast<std::int64_t>(a) - static_cast<std::int64_t>(p)
                   : static_cast<std::int64_t>(a);
}

}  // namespace x1

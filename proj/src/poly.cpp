#include "x1/poly.hpp"

#include <sstream>

namespace x1 {

ZPoly zpoly(std::initializer_list<long> c) {
  std::vector<Integer> v;
  for (long a : c) v.emplace_back(a);
  return ZPoly(std::move(v));
}

ZPoly zpoly_from_string(const std::string& s) {
  std::istringstream is(s);
  std::vector<Integer> v;
  std::string tok;
  while (is >> tok) v.push_back(parse_integer(tok));
  return ZPoly(std::move(v));
}

std::string zpoly_to_string(const ZPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += p[i].get_str();
  }
  return out;
}

Integer naive_height(const ZPoly& p) {
  Integer h = 0;
  for (const auto& c : p.coeffs()) h = std::max<Integer>(h, abs(c));
  return h;
}

ZPoly exact_div(const ZPoly& a, const ZPoly& b) {
  if (b.is_zero()) throw Error("domain", "division by zero polynomial");
  if (a.degree() < b.degree()) {
    if (a.is_zero()) return a;
    throw Error("not-divisible", "polynomial not divisible");
  }
  std::vector<Integer> r = a.coeffs();
  std::vector<Integer> q(a.degree() - b.degree() + 1, 0);
  const int db = b.degree();
  for (int i = a.degree(); i >= db; --i) {
    if (r[i] == 0) continue;
    if (!mpz_divisible_p(r[i].get_mpz_t(), b.lead().get_mpz_t()))
      throw Error("not-divisible", "polynomial not divisible over Z");
    Integer c = r[i] / b.lead();
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= c * b[j];
  }
  for (int i = 0; i < db; ++i)
    if (r[i] != 0) throw Error("not-divisible", "polynomial not divisible over Z");
  return ZPoly(std::move(q));
}

ZPoly sqrt_poly(const ZPoly& a) {
  if (a.is_zero()) return a;
  if (a.degree() % 2) throw Error("not-square", "odd degree polynomial is not a square");
  Integer lc = sqrt(a.lead());
  if (lc * lc != a.lead()) throw Error("not-square", "leading coefficient is not a square");
  const int d = a.degree() / 2;
  // Determine coefficients of s from the top down.
  std::vector<Integer> s(d + 1, 0);
  s[d] = lc;
  for (int k = d - 1; k >= 0; --k) {
    // coefficient of X^(d+k) in s^2 is 2 s_d s_k + sum_{i+j=d+k, k<i,j<d} s_i s_j
    Integer acc = a[d + k];
    for (int i = k + 1; i < d; ++i) {
      int j = d + k - i;
      if (j > k && j < d) acc -= s[i] * s[j];
    }
    Integer den = 2 * lc;
    if (!mpz_divisible_p(acc.get_mpz_t(), den.get_mpz_t())) throw Error("not-square", "polynomial is not a square over Z");
    s[k] = acc / den;
  }
  ZPoly r(std::move(s));
  if (r * r != a) throw Error("not-square", "polynomial is not a square over Z");
  return r;
}

ZPoly clear_denominators(const QPoly& a, Integer* denominator) {
  Integer den = 1;
  for (const auto& c : a.coeffs()) den = lcm(den, Integer(c.get_den()));
  std::vector<Integer> v;
  for (const auto& c : a.coeffs()) v.push_back(Integer(c.get_num() * (den / c.get_den())));
  if (denominator) *denominator = den;
  return ZPoly(std::move(v));
}

QPoly to_q(const ZPoly& a) {
  std::vector<Rational> v;
  for (const auto& c : a.coeffs()) v.emplace_back(c);
  return QPoly(std::move(v));
}

}  // namespace x1

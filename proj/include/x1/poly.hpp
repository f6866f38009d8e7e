#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "x1/integer.hpp"

namespace x1 {

inline bool is_zero(const Integer& a) { return a == 0; }
inline bool is_one(const Integer& a) { return a == 1; }
inline Integer zero_like(const Integer&) { return 0; }
inline Integer one_like(const Integer&) { return 1; }
inline Integer inverse(const Integer& a) {
  if (a == 1 || a == -1) return a;
  throw Error("not-invertible", "integer " + a.get_str() + " is not a unit");
}
inline std::string to_string(const Integer& a) { return a.get_str(); }

inline bool is_zero(const Rational& a) { return a == 0; }
inline bool is_one(const Rational& a) { return a == 1; }
inline Rational zero_like(const Rational&) { return 0; }
inline Rational one_like(const Rational&) { return 1; }
inline Rational inverse(const Rational& a) {
  if (a == 0) throw Error("not-invertible", "division by zero");
  return 1 / a;
}
inline std::string to_string(const Rational& a) { return a.get_str(); }

namespace detail {
// Unqualified so that argument-dependent lookup sees coefficient types declared later.
template <class T>
bool coeff_is_zero(const T& a) {
  return is_zero(a);
}
template <class T>
bool coeff_is_one(const T& a) {
  return is_one(a);
}
}  // namespace detail

// Dense univariate polynomial; coefficient i multiplies X^i. Zero is empty.
template <class T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<T> c) : c_(std::move(c)) { trim(); }

  static Poly constant(const T& a) { return Poly(std::vector<T>{a}); }
  static Poly monomial(const T& a, std::size_t deg) {
    std::vector<T> c(deg + 1, zero_like(a));
    c[deg] = a;
    return Poly(std::move(c));
  }
  static Poly x(const T& one) { return monomial(one, 1); }
  // X - a
  static Poly linear(const T& a) {
    return Poly(std::vector<T>{zero_like(a) - a, one_like(a)});
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }
  const T& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<T>& coeffs() const { return c_; }
  const T& lead() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && detail::coeff_is_one(c_.back()); }
  T coeff(std::size_t i, const T& zero) const { return i < c_.size() ? c_[i] : zero; }

  T eval(const T& x) const {
    T r = zero_like(x);
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }

  Poly derivative() const {
    std::vector<T> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * scalar_of(i));
    return Poly(std::move(d));
  }

  // Multiply by X^k.
  Poly shift(std::size_t k) const {
    if (c_.empty()) return *this;
    std::vector<T> c(k, zero_like(c_[0]));
    c.insert(c.end(), c_.begin(), c_.end());
    return Poly(std::move(c));
  }
  // Coefficients of X^0..X^(k-1).
  Poly truncate(std::size_t k) const {
    std::vector<T> c(c_.begin(), c_.begin() + std::min(k, c_.size()));
    return Poly(std::move(c));
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) {
      std::size_t old = c_.size();
      c_.resize(o.c_.size(), zero_like(o.c_[0]));
      for (std::size_t i = old; i < c_.size(); ++i) c_[i] = zero_like(o.c_[0]);
    }
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) {
      std::size_t old = c_.size();
      c_.resize(o.c_.size(), zero_like(o.c_[0]));
      for (std::size_t i = old; i < c_.size(); ++i) c_[i] = zero_like(o.c_[0]);
    }
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Poly& operator*=(const T& a) {
    for (auto& x : c_) x *= a;
    trim();
    return *this;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& x : r.c_) x = zero_like(x) - x;
    return r;
  }
  friend Poly operator*(Poly a, const T& s) { return a *= s; }
  friend Poly operator*(const T& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return Poly();
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, zero_like(a.c_[0]));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (detail::coeff_is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(c));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  std::vector<T>& mutable_coeffs() { return c_; }
  void normalize() { trim(); }

 private:
  void trim() {
    while (!c_.empty() && detail::coeff_is_zero(c_.back())) c_.pop_back();
  }
  T scalar_of(std::size_t i) const {
    // i * 1 in the coefficient ring, without needing a conversion constructor.
    T one = one_like(c_[0]);
    T r = zero_like(one), b = one;
    for (std::size_t k = i; k; k >>= 1) {
      if (k & 1) r += b;
      b += b;
    }
    return r;
  }

  std::vector<T> c_;
};

template <class T>
std::pair<Poly<T>, Poly<T>> divrem(const Poly<T>& a, const Poly<T>& b) {
  if (b.is_zero()) throw Error("domain", "polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly<T>(), a};
  std::vector<T> r = a.coeffs();
  const auto& bc = b.coeffs();
  const int db = b.degree();
  T li = inverse(b.lead());
  std::vector<T> q(a.degree() - db + 1, zero_like(b.lead()));
  for (int i = a.degree(); i >= db; --i) {
    if (detail::coeff_is_zero(r[i])) continue;
    T c = r[i] * li;
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= c * bc[j];
  }
  r.resize(db);
  return {Poly<T>(std::move(q)), Poly<T>(std::move(r))};
}

template <class T>
Poly<T> operator%(const Poly<T>& a, const Poly<T>& b) {
  return divrem(a, b).second;
}
template <class T>
Poly<T> operator/(const Poly<T>& a, const Poly<T>& b) {
  return divrem(a, b).first;
}

template <class T>
Poly<T> monic(const Poly<T>& a) {
  if (a.is_zero()) return a;
  return a * inverse(a.lead());
}

template <class T>
Poly<T> gcd(Poly<T> a, Poly<T> b) {
  while (!b.is_zero()) {
    Poly<T> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

// Returns (g, s, t) with s*a + t*b = g monic.
template <class T>
std::tuple<Poly<T>, Poly<T>, Poly<T>> xgcd(const Poly<T>& a, const Poly<T>& b,
                                           const T& one) {
  Poly<T> r0 = a, r1 = b;
  Poly<T> s0 = Poly<T>::constant(one), s1;
  Poly<T> t0, t1 = Poly<T>::constant(one);
  while (!r1.is_zero()) {
    auto [q, r] = divrem(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<T> s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly<T> t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  T li = inverse(r0.lead());
  return {r0 * li, s0 * li, t0 * li};
}

// a^{-1} mod m, or throws if not coprime.
template <class T>
Poly<T> invmod(const Poly<T>& a, const Poly<T>& m, const T& one) {
  auto [g, s, t] = xgcd(a % m, m, one);
  if (g.degree() != 0) throw Error("not-invertible", "polynomial not invertible modulo");
  return s % m;
}

template <class T>
Poly<T> mulmod(const Poly<T>& a, const Poly<T>& b, const Poly<T>& m) {
  return (a * b) % m;
}

template <class T>
Poly<T> powmod(const Poly<T>& base, const Integer& e, const Poly<T>& m, const T& one) {
  Poly<T> r = Poly<T>::constant(one) % m;
  Poly<T> b = base % m;
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = mulmod(r, r, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(r, b, m);
  }
  return r;
}

// f(g(X)) mod m by Horner.
template <class T>
Poly<T> compose_mod(const Poly<T>& f, const Poly<T>& g, const Poly<T>& m) {
  Poly<T> r;
  for (std::size_t i = f.size(); i-- > 0;) r = (r * g + Poly<T>::constant(f[i])) % m;
  return r;
}

template <class T>
Poly<T> compose(const Poly<T>& f, const Poly<T>& g) {
  Poly<T> r;
  for (std::size_t i = f.size(); i-- > 0;) r = r * g + Poly<T>::constant(f[i]);
  return r;
}

template <class T>
Poly<T> pow(const Poly<T>& a, unsigned e, const T& one) {
  Poly<T> r = Poly<T>::constant(one), b = a;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

template <class T>
std::string to_string(const Poly<T>& p, const std::string& var = "X") {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = p.size(); i-- > 0;) {
    if (detail::coeff_is_zero(p[i])) continue;
    if (!first) os << " + ";
    first = false;
    bool unit = detail::coeff_is_one(p[i]);
    if (!unit || i == 0) os << to_string(p[i]);
    if (i > 0) {
      if (!unit) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

using ZPoly = Poly<Integer>;
using QPoly = Poly<Rational>;

// Integer polynomial helpers.
ZPoly zpoly(std::initializer_list<long> c);
ZPoly zpoly_from_string(const std::string& s);  // space separated, constant first
std::string zpoly_to_string(const ZPoly& p);     // inverse of zpoly_from_string
Integer naive_height(const ZPoly& p);
ZPoly exact_div(const ZPoly& a, const ZPoly& b);  // throws unless b | a over Z
// Returns q with q^2 = a over Z, or throws.
ZPoly sqrt_poly(const ZPoly& a);
ZPoly clear_denominators(const QPoly& a, Integer* denominator = nullptr);
QPoly to_q(const ZPoly& a);

}  // namespace x1

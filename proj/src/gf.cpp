#include "x1/gf.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace x1 {

namespace {

using Vec = std::vector<std::uint64_t>;

void trim(Vec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Vec vmul(const Vec& a, const Vec& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Vec c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  }
  trim(c);
  return c;
}

Vec vmod(Vec a, const Vec& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  std::uint64_t li = invmod_u64(m.back(), p);
  while (a.size() > dm) {
    std::uint64_t c = a.back() * li % p;
    std::size_t off = a.size() - 1 - dm;
    for (std::size_t j = 0; j <= dm; ++j) a[off + j] = submod(a[off + j], c * m[j] % p, p);
    trim(a);
  }
  return a;
}

Vec vsub(Vec a, const Vec& b, std::uint64_t p) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = submod(a[i], b[i], p);
  trim(a);
  return a;
}

Vec vgcd(Vec a, Vec b, std::uint64_t p) {
  trim(a), trim(b);
  while (!b.empty()) {
    Vec r = vmod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Vec vpowmod(Vec b, const Integer& e, const Vec& m, std::uint64_t p) {
  Vec r{1};
  b = vmod(b, m, p);
  for (std::size_t i = mpz_sizeinbase(e.get_mpz_t(), 2); i-- > 0;) {
    r = vmod(vmul(r, r, p), m, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = vmod(vmul(r, b, p), m, p);
  }
  return r;
}

struct Registry {
  std::mutex mu;
  std::map<std::pair<std::uint64_t, unsigned>, const GaloisField*> standard;
  std::map<std::pair<std::uint64_t, Vec>, const GaloisField*> custom;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

bool is_irreducible_prime_field(const std::vector<std::uint64_t>& f_in, std::uint64_t p) {
  Vec f = f_in;
  trim(f);
  if (f.size() < 2) return false;
  const unsigned k = static_cast<unsigned>(f.size() - 1);
  if (k == 1) return true;
  Vec x{0, 1};
  Integer P = from_u64(p);
  // x^(p^i) mod f for i = 1..k
  std::vector<Vec> xp(k + 1);
  xp[0] = x;
  for (unsigned i = 1; i <= k; ++i) xp[i] = vpowmod(xp[i - 1], P, f, p);
  if (vsub(xp[k], x, p) != Vec{}) return false;
  for (auto [r, e] : factor_small(k)) {
    (void)e;
    Vec g = vgcd(f, vsub(xp[k / r], x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

GaloisField::GaloisField(std::uint64_t p, Vec mod) : p_(p), k_(static_cast<unsigned>(mod.size() - 1)), mod_(std::move(mod)) {
  q_ = pow(from_u64(p_), k_);
  build_frobenius();
}

void GaloisField::build_frobenius() {
  frob_.assign(k_, Vec(k_, 0));
  if (k_ == 1) {
    frob_[0][0] = 1;
    return;
  }
  Vec tp = vpowmod(Vec{0, 1}, from_u64(p_), mod_, p_);
  Vec cur{1};
  for (unsigned j = 0; j < k_; ++j) {
    for (std::size_t i = 0; i < cur.size(); ++i) frob_[j][i] = cur[i];
    cur = vmod(vmul(cur, tp, p_), mod_, p_);
  }
}

const GaloisField* GaloisField::get(std::uint64_t p, unsigned k) {
  if (p >= (1ull << 31) || !is_prime(p)) throw Error("domain", "field characteristic must be a prime below 2^31");
  if (k == 0) throw Error("domain", "extension degree must be positive");
  auto& reg = registry();
  {
    std::lock_guard<std::mutex> lock(reg.mu);
    auto it = reg.standard.find({p, k});
    if (it != reg.standard.end()) return it->second;
  }
  Vec mod;
  if (k == 1) {
    mod = {0, 1};
  } else {
    // First irreducible t^k + c_{k-1} t^{k-1} + ... + c_0 in base-p order of (c_0, c_1, ...).
    for (std::uint64_t idx = 1;; ++idx) {
      Vec c(k + 1, 0);
      c[k] = 1;
      std::uint64_t v = idx;
      bool overflow = false;
      for (unsigned i = 0; i < k; ++i) {
        c[i] = v % p;
        v /= p;
      }
      if (v) overflow = true;
      if (overflow) throw Error("internal", "no irreducible polynomial found");
      if (c[0] == 0) continue;
      if (is_irreducible_prime_field(c, p)) {
        mod = c;
        break;
      }
    }
  }
  auto* F = new GaloisField(p, mod);
  std::lock_guard<std::mutex> lock(reg.mu);
  auto [it, inserted] = reg.standard.emplace(std::make_pair(p, k), F);
  if (!inserted) delete F;
  return it->second;
}

const GaloisField* GaloisField::with_modulus(std::uint64_t p, const Vec& modulus) {
  Vec m = modulus;
  trim(m);
  if (m.empty() || m.back() != 1) throw Error("domain", "field modulus must be monic");
  for (auto c : m)
    if (c >= p) throw Error("domain", "field modulus coefficient out of range");
  unsigned k = static_cast<unsigned>(m.size() - 1);
  const GaloisField* std_field = get(p, k);
  if (std_field->mod_ == m) return std_field;
  if (!is_irreducible_prime_field(m, p)) throw Error("reducible-modulus", "field modulus is not irreducible");
  auto& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  auto it = reg.custom.find({p, m});
  if (it != reg.custom.end()) return it->second;
  auto* F = new GaloisField(p, m);
  reg.custom.emplace(std::make_pair(p, m), F);
  return F;
}

Gf GaloisField::zero() const { return Gf(this, Gf::Coeffs(k_, 0)); }
Gf GaloisField::one() const {
  Gf::Coeffs c(k_, 0);
  c[0] = 1;
  return Gf(this, c);
}
Gf GaloisField::gen() const {
  if (k_ == 1) return from_int(static_cast<std::int64_t>(p_ - mod_[0]) % static_cast<std::int64_t>(p_));
  Gf::Coeffs c(k_, 0);
  c[1] = 1;
  return Gf(this, c);
}
Gf GaloisField::from_int(std::int64_t a) const {
  Gf::Coeffs c(k_, 0);
  c[0] = static_cast<std::uint32_t>(reduce_i64(a, p_));
  return Gf(this, c);
}
Gf GaloisField::from_integer(const Integer& a) const {
  Gf::Coeffs c(k_, 0);
  c[0] = static_cast<std::uint32_t>(reduce(a, p_));
  return Gf(this, c);
}
Gf GaloisField::from_coeffs(const Vec& v) const {
  if (v.size() > k_) throw Error("domain", "too many coefficients for field element");
  Gf::Coeffs c(k_, 0);
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = static_cast<std::uint32_t>(v[i] % p_);
  return Gf(this, c);
}
Gf GaloisField::random(std::mt19937_64& rng) const {
  Gf::Coeffs c(k_, 0);
  for (auto& x : c) x = static_cast<std::uint32_t>(rng() % p_);
  return Gf(this, c);
}
Gf GaloisField::element_at(std::uint64_t index) const {
  Gf::Coeffs c(k_, 0);
  for (auto& x : c) {
    x = static_cast<std::uint32_t>(index % p_);
    index /= p_;
  }
  return Gf(this, c);
}

std::string GaloisField::describe() const {
  std::ostringstream os;
  os << p_ << "^" << k_ << " [";
  for (std::size_t i = 0; i < mod_.size(); ++i) os << (i ? " " : "") << mod_[i];
  os << "]";
  return os.str();
}

bool Gf::is_zero() const {
  for (auto x : c_)
    if (x) return false;
  return true;
}
bool Gf::is_one() const {
  if (c_.empty() || c_[0] != 1) return false;
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i]) return false;
  return true;
}
bool Gf::in_prime_field() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i]) return false;
  return true;
}
std::uint64_t Gf::to_u64() const {
  if (!in_prime_field()) throw Error("domain", "element not in the prime field");
  return c_[0];
}

Gf& Gf::operator+=(const Gf& o) {
  const std::uint64_t p = F_ ? F_->p_ : o.F_->p_;
  if (!F_) *this = o.F_->zero();
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = static_cast<std::uint32_t>(addmod(c_[i], o.c_[i], p));
  return *this;
}
Gf& Gf::operator-=(const Gf& o) {
  if (!F_) *this = o.F_->zero();
  const std::uint64_t p = F_->p_;
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = static_cast<std::uint32_t>(submod(c_[i], o.c_[i], p));
  return *this;
}
Gf Gf::operator-() const {
  Gf r = *this;
  for (auto& x : r.c_) x = x ? static_cast<std::uint32_t>(F_->p_ - x) : 0;
  return r;
}

Gf& Gf::operator*=(const Gf& o) {
  const std::uint64_t p = F_->p_;
  const unsigned k = F_->k_;
  if (k == 1) {
    c_[0] = static_cast<std::uint32_t>(std::uint64_t(c_[0]) * o.c_[0] % p);
    return *this;
  }
  std::uint64_t t[2 * 64];
  std::vector<std::uint64_t> big;
  std::uint64_t* acc = t;
  if (2 * k > 128) {
    big.assign(2 * k, 0);
    acc = big.data();
  } else {
    std::fill(t, t + 2 * k, 0);
  }
  // Products are < 2^62, so four may be summed before reducing.
  for (unsigned i = 0; i < k; ++i) {
    std::uint64_t a = c_[i];
    if (!a) continue;
    for (unsigned j = 0; j < k; ++j) {
      std::uint64_t s = acc[i + j] + a * o.c_[j];
      acc[i + j] = s >= (1ull << 63) ? s % p : s;
    }
  }
  for (unsigned i = 0; i < 2 * k - 1; ++i) acc[i] %= p;
  const auto& m = F_->mod_;
  for (unsigned i = 2 * k - 2; i >= k; --i) {
    std::uint64_t c = acc[i] % p;
    if (!c) continue;
    std::uint64_t neg = p - c;
    for (unsigned j = 0; j < k; ++j) acc[i - k + j] = (acc[i - k + j] + neg * m[j]) % p;
  }
  for (unsigned i = 0; i < k; ++i) c_[i] = static_cast<std::uint32_t>(acc[i] % p);
  return *this;
}

Gf Gf::scaled(std::uint64_t s) const {
  Gf r = *this;
  s %= F_->p_;
  for (auto& x : r.c_) x = static_cast<std::uint32_t>(std::uint64_t(x) * s % F_->p_);
  return r;
}

Gf Gf::inv() const {
  if (is_zero()) throw Error("not-invertible", "inverse of zero in " + F_->describe());
  const std::uint64_t p = F_->p_;
  if (F_->k_ == 1) {
    Gf r = *this;
    r.c_[0] = static_cast<std::uint32_t>(invmod_u64(c_[0], p));
    return r;
  }
  // Extended Euclid in F_p[t] against the modulus.
  Vec r0 = F_->mod_, r1(c_.begin(), c_.end());
  trim(r1);
  Vec s0{}, s1{1};
  while (!r1.empty()) {
    // q, r = divmod(r0, r1)
    Vec a = r0;
    Vec q(a.size() >= r1.size() ? a.size() - r1.size() + 1 : 0, 0);
    std::uint64_t li = invmod_u64(r1.back(), p);
    while (a.size() >= r1.size()) {
      std::uint64_t c = a.back() * li % p;
      std::size_t off = a.size() - r1.size();
      q[off] = c;
      for (std::size_t j = 0; j < r1.size(); ++j) a[off + j] = submod(a[off + j], c * r1[j] % p, p);
      trim(a);
    }
    trim(q);
    Vec s2 = vsub(s0, vmul(q, s1, p), p);
    r0 = std::move(r1);
    r1 = std::move(a);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  std::uint64_t li = invmod_u64(r0[0], p);
  Gf r = F_->zero();
  for (std::size_t i = 0; i < s0.size(); ++i) r.c_[i] = static_cast<std::uint32_t>(s0[i] * li % p);
  return r;
}

Gf Gf::pow(const Integer& e) const {
  if (e < 0) return inv().pow(Integer(-e));
  Gf r = F_->one();
  for (std::size_t i = mpz_sizeinbase(e.get_mpz_t(), 2); i-- > 0;) {
    r *= r;
    if (mpz_tstbit(e.get_mpz_t(), i)) r *= *this;
  }
  return r;
}

Gf Gf::pow(std::uint64_t e) const {
  Gf r = F_->one(), b = *this;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

Gf Gf::frobenius(unsigned times) const {
  const unsigned k = F_->k_;
  times %= k;
  if (k == 1 || times == 0) return *this;
  const std::uint64_t p = F_->p_;
  const auto& tab = F_->frob_;
  Gf cur = *this;
  for (unsigned t = 0; t < times; ++t) {
    Gf next = F_->zero();
    std::vector<std::uint64_t> acc(k, 0);
    for (unsigned j = 0; j < k; ++j) {
      std::uint64_t a = cur.c_[j];
      if (!a) continue;
      for (unsigned i = 0; i < k; ++i) acc[i] = (acc[i] + a * tab[j][i]) % p;
    }
    for (unsigned i = 0; i < k; ++i) next.c_[i] = static_cast<std::uint32_t>(acc[i]);
    cur = std::move(next);
  }
  return cur;
}

Gf Gf::norm() const {
  Gf r = *this;
  Gf c = *this;
  for (unsigned i = 1; i < F_->k_; ++i) {
    c = c.frobenius();
    r *= c;
  }
  return r;
}

Gf Gf::trace() const {
  Gf r = *this;
  Gf c = *this;
  for (unsigned i = 1; i < F_->k_; ++i) {
    c = c.frobenius();
    r += c;
  }
  return r;
}

bool Gf::is_square() const {
  if (is_zero() || F_->p_ == 2) return true;
  return legendre(norm().to_u64(), F_->p_) == 1;
}

Gf Gf::sqrt() const {
  if (is_zero()) return *this;
  const Integer& q = F_->q_;
  if (F_->p_ == 2) return pow(Integer(q / 2));
  if (!is_square()) throw Error("not-square", "element has no square root");
  Integer qm1 = q - 1;
  unsigned s = 0;
  Integer t = qm1;
  while (mpz_even_p(t.get_mpz_t())) {
    t /= 2;
    ++s;
  }
  Gf z;
  for (std::uint64_t idx = 2;; ++idx) {
    z = F_->element_at(idx);
    if (!z.is_zero() && !z.is_square()) break;
  }
  Gf c = z.pow(t);
  Gf x = pow(Integer((t + 1) / 2));
  Gf b = pow(t);
  unsigned m = s;
  while (!b.is_one()) {
    unsigned i = 0;
    Gf bb = b;
    while (!bb.is_one()) {
      bb *= bb;
      ++i;
    }
    Gf g = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) g *= g;
    x *= g;
    c = g * g;
    b *= c;
    m = i;
  }
  return x;
}

Integer Gf::order() const {
  if (is_zero()) throw Error("domain", "order of zero");
  Integer n = F_->q_ - 1;
  Integer ord = n;
  // Factor q-1 by trial division; q-1 stays modest where this is used.
  Integer rest = n;
  std::vector<Integer> primes;
  for (Integer d = 2; d * d <= rest; ++d) {
    if (mpz_divisible_p(rest.get_mpz_t(), d.get_mpz_t())) {
      primes.push_back(d);
      while (mpz_divisible_p(rest.get_mpz_t(), d.get_mpz_t())) rest /= d;
    }
  }
  if (rest > 1) primes.push_back(rest);
  for (const auto& r : primes) {
    while (mpz_divisible_p(ord.get_mpz_t(), r.get_mpz_t()) && pow(Integer(ord / r)).is_one()) ord /= r;
  }
  return ord;
}

std::uint64_t Gf::index() const {
  std::uint64_t v = 0;
  for (std::size_t i = c_.size(); i-- > 0;) v = v * F_->p_ + c_[i];
  return v;
}

std::string Gf::to_string() const {
  if (!F_) return "?";
  if (F_->k_ == 1) return std::to_string(c_[0]);
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? " " : "") << c_[i];
  os << "]";
  return os.str();
}

GfPoly gfpoly(const GaloisField* F, const std::vector<std::int64_t>& c) {
  std::vector<Gf> v;
  for (auto a : c) v.push_back(F->from_int(a));
  return GfPoly(std::move(v));
}

GfPoly reduce_poly(const ZPoly& f, const GaloisField* F) {
  std::vector<Gf> v;
  for (const auto& a : f.coeffs()) v.push_back(F->from_integer(a));
  return GfPoly(std::move(v));
}

GfPoly reduce_poly(const QPoly& f, const GaloisField* F) {
  std::vector<Gf> v;
  for (const auto& a : f.coeffs()) {
    Gf d = F->from_integer(a.get_den());
    if (d.is_zero()) throw Error("bad-prime", "denominator vanishes modulo " + std::to_string(F->characteristic()));
    v.push_back(F->from_integer(a.get_num()) / d);
  }
  return GfPoly(std::move(v));
}

GfPoly frobenius_poly(const GfPoly& f, unsigned times) {
  std::vector<Gf> v;
  for (const auto& a : f.coeffs()) v.push_back(a.frobenius(times));
  return GfPoly(std::move(v));
}

ZPoly lift_poly(const GfPoly& f) {
  std::vector<Integer> v;
  for (const auto& a : f.coeffs()) v.push_back(from_u64(a.to_u64()));
  return ZPoly(std::move(v));
}

Embedding::Embedding(const GaloisField* src, const GaloisField* dst, Gf image)
    : src_(src), dst_(dst), image_(std::move(image)) {
  if (src->characteristic() != dst->characteristic() || dst->degree() % src->degree() != 0)
    throw Error("domain", "no embedding between these fields");
  build_inverse();
}

Embedding Embedding::identity(const GaloisField* F) { return Embedding(F, F, F->gen()); }

void Embedding::build_inverse() {
  const unsigned a = src_->degree(), b = dst_->degree();
  const std::uint64_t p = src_->characteristic();
  powers_.clear();
  Gf cur = dst_->one();
  for (unsigned i = 0; i < a; ++i) {
    powers_.push_back(cur);
    cur *= image_;
  }
  // Augmented system: rows r of [M | I] where M[r][i] = powers_[i][r]; we keep
  // a reduced form to solve M s = v.
  solve_rows_.assign(b, std::vector<std::uint64_t>(a + b, 0));
  for (unsigned r = 0; r < b; ++r) {
    for (unsigned i = 0; i < a; ++i) solve_rows_[r][i] = powers_[i].coeffs()[r];
    solve_rows_[r][a + r] = 1;
  }
  pivot_col_.assign(a, -1);
  unsigned row = 0;
  for (unsigned col = 0; col < a; ++col) {
    unsigned piv = row;
    while (piv < b && solve_rows_[piv][col] == 0) ++piv;
    if (piv == b) throw Error("internal", "embedding image is not a generator");
    std::swap(solve_rows_[piv], solve_rows_[row]);
    std::uint64_t inv = invmod_u64(solve_rows_[row][col], p);
    for (auto& x : solve_rows_[row]) x = x * inv % p;
    for (unsigned r = 0; r < b; ++r) {
      if (r == row || solve_rows_[r][col] == 0) continue;
      std::uint64_t c = solve_rows_[r][col];
      for (unsigned j = 0; j < a + b; ++j)
        solve_rows_[r][j] = submod(solve_rows_[r][j], c * solve_rows_[row][j] % p, p);
    }
    pivot_col_[col] = static_cast<int>(row);
    ++row;
  }
}

Gf Embedding::map(const Gf& x) const {
  if (src_ == dst_) return x;
  Gf r = dst_->zero();
  for (unsigned i = 0; i < src_->degree(); ++i) {
    std::uint64_t c = x.coeffs()[i];
    if (c) r += powers_[i].scaled(c);
  }
  return r;
}

GfPoly Embedding::map(const GfPoly& f) const {
  std::vector<Gf> v;
  for (const auto& c : f.coeffs()) v.push_back(map(c));
  return GfPoly(std::move(v));
}

bool Embedding::in_image(const Gf& x) const {
  const unsigned a = src_->degree(), b = dst_->degree();
  const std::uint64_t p = src_->characteristic();
  // Rows beyond the pivots must give zero combinations.
  for (unsigned r = a; r < b; ++r) {
    std::uint64_t s = 0;
    for (unsigned j = 0; j < b; ++j) s = (s + solve_rows_[r][a + j] * x.coeffs()[j]) % p;
    if (s) return false;
  }
  return true;
}

Gf Embedding::preimage(const Gf& x) const {
  if (src_ == dst_) return x;
  const unsigned a = src_->degree(), b = dst_->degree();
  const std::uint64_t p = src_->characteristic();
  if (!in_image(x)) throw Error("not-in-subfield", "element does not lie in the embedded subfield");
  std::vector<std::uint64_t> s(a, 0);
  for (unsigned col = 0; col < a; ++col) {
    const auto& row = solve_rows_[pivot_col_[col]];
    std::uint64_t v = 0;
    for (unsigned j = 0; j < b; ++j) v = (v + row[a + j] * x.coeffs()[j]) % p;
    s[col] = v;
  }
  return src_->from_coeffs(s);
}

Embedding Embedding::then(const Embedding& next) const {
  if (dst_ != next.src_) throw Error("domain", "embeddings do not compose");
  return Embedding(src_, next.dst_, next.map(image_));
}

}  // namespace x1

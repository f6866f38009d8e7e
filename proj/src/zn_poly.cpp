#include "x1/zn_poly.hpp"

#include <algorithm>

namespace x1 {

void zn_trim(ZnVec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ZnVec zn_reduce(const std::vector<Integer>& a, const Integer& N) {
  ZnVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = mod(a[i], N);
  zn_trim(out);
  return out;
}

int zn_degree(const ZnVec& a) { return static_cast<int>(a.size()) - 1; }

ZnVec zn_add(const ZnVec& a, const ZnVec& b, const Integer& N) {
  ZnVec out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size()) out[i] += a[i];
    if (i < b.size()) out[i] += b[i];
    if (out[i] >= N) out[i] -= N;
  }
  zn_trim(out);
  return out;
}

ZnVec zn_sub(const ZnVec& a, const ZnVec& b, const Integer& N) {
  ZnVec out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size()) out[i] += a[i];
    if (i < b.size()) out[i] -= b[i];
    if (out[i] < 0) out[i] += N;
  }
  zn_trim(out);
  return out;
}

ZnVec zn_scale(const ZnVec& a, const Integer& s, const Integer& N) {
  ZnVec out(a.size());
  Integer t = mod(s, N);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * t % N;
  zn_trim(out);
  return out;
}

ZnVec zn_mul_schoolbook(const ZnVec& a, const ZnVec& b, const Integer& N) {
  if (a.empty() || b.empty()) return {};
  ZnVec out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  for (auto& x : out) x %= N;
  zn_trim(out);
  return out;
}

namespace {

// Packs coefficients into slots of `limbs` machine words each.
void pack(const ZnVec& a, std::size_t limbs, Integer& out) {
  std::vector<mp_limb_t> buf(a.size() * limbs, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t n = mpz_size(a[i].get_mpz_t());
    for (std::size_t k = 0; k < n; ++k) buf[i * limbs + k] = mpz_getlimbn(a[i].get_mpz_t(), k);
  }
  mpz_import(out.get_mpz_t(), buf.size(), -1, sizeof(mp_limb_t), 0, 0, buf.data());
}

}  // namespace

ZnVec zn_mul(const ZnVec& a, const ZnVec& b, const Integer& N) {
  if (a.empty() || b.empty()) return {};
  const std::size_t small = std::min(a.size(), b.size());
  if (small <= 4) return zn_mul_schoolbook(a, b, N);
  std::size_t bits = 2 * mpz_sizeinbase(N.get_mpz_t(), 2) + mpz_sizeinbase(Integer(small).get_mpz_t(), 2) + 1;
  const std::size_t limb_bits = sizeof(mp_limb_t) * 8;
  std::size_t limbs = (bits + limb_bits - 1) / limb_bits;
  Integer A, B;
  pack(a, limbs, A);
  pack(b, limbs, B);
  Integer C = A * B;
  const std::size_t n = a.size() + b.size() - 1;
  std::vector<mp_limb_t> buf(n * limbs + 1, 0);
  std::size_t count = 0;
  mpz_export(buf.data(), &count, -1, sizeof(mp_limb_t), 0, 0, C.get_mpz_t());
  ZnVec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    mpz_import(out[i].get_mpz_t(), limbs, -1, sizeof(mp_limb_t), 0, 0, buf.data() + i * limbs);
    out[i] %= N;
  }
  zn_trim(out);
  return out;
}

Integer zn_eval(const ZnVec& a, const Integer& x, const Integer& N) {
  Integer r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = (r * x + a[i]) % N;
  return mod(r, N);
}

ZnVec zn_derivative(const ZnVec& a, const Integer& N) {
  ZnVec out;
  for (std::size_t i = 1; i < a.size(); ++i) out.push_back(a[i] * static_cast<unsigned long>(i) % N);
  zn_trim(out);
  return out;
}

namespace {

Integer unit_inverse(const Integer& a, const Integer& N) {
  Integer g = gcd(a, N);
  if (g != 1) throw Error("not-invertible", g.get_str());
  return invmod(a, N);
}

}  // namespace

std::pair<ZnVec, ZnVec> zn_divrem(const ZnVec& a, const ZnVec& b, const Integer& N) {
  if (b.empty()) throw Error("domain", "polynomial division by zero");
  ZnVec r = a;
  if (r.size() < b.size()) return {{}, r};
  Integer li = unit_inverse(b.back(), N);
  const std::size_t db = b.size() - 1;
  ZnVec q(r.size() - db, 0);
  for (std::size_t i = r.size(); i-- > db;) {
    if (r[i] == 0) continue;
    Integer c = r[i] * li % N;
    q[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) r[i - db + j] = mod(r[i - db + j] - c * b[j], N);
  }
  r.resize(db);
  zn_trim(r);
  zn_trim(q);
  return {q, r};
}

ZnVec zn_gcd(ZnVec a, ZnVec b, const Integer& N) {
  while (!b.empty()) {
    ZnVec r = zn_divrem(a, b, N).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  return zn_scale(a, unit_inverse(a.back(), N), N);
}

ZnVec zn_invmod(const ZnVec& a, const ZnVec& m, const Integer& N) {
  ZnVec r0 = m, r1 = zn_divrem(a, m, N).second;
  ZnVec t0, t1 = {Integer(1)};
  while (!r1.empty()) {
    auto [q, r] = zn_divrem(r0, r1, N);
    ZnVec t = zn_sub(t0, zn_mul(q, t1, N), N);
    r0 = std::move(r1);
    r1 = std::move(r);
    t0 = std::move(t1);
    t1 = std::move(t);
  }
  if (r0.size() != 1) throw Error("not-invertible", "polynomial is not invertible modulo m");
  return zn_divrem(zn_scale(t0, unit_inverse(r0[0], N), N), m, N).second;
}

ZnModulus::ZnModulus(Integer N, ZnVec m) : N_(std::move(N)), m_(std::move(m)) {
  zn_trim(m_);
  if (m_.empty() || m_.back() != 1) throw Error("domain", "modulus polynomial must be monic");
  const std::size_t n = m_.size() - 1;
  // reverse(m) = sum m[n - i] X^i, constant term 1
  inv_rev_.assign(n, 0);
  if (n == 0) return;
  inv_rev_[0] = 1;
  for (std::size_t i = 1; i < n; ++i) {
    Integer s = 0;
    for (std::size_t j = 1; j <= i && j <= n; ++j) s += m_[n - j] * inv_rev_[i - j];
    inv_rev_[i] = mod(-s, N_);
  }
}

ZnVec ZnModulus::reduce(ZnVec a) const {
  zn_trim(a);
  const std::size_t n = m_.size() - 1;
  if (n == 0) return {};
  while (a.size() > n) {
    const std::size_t da = a.size() - 1;
    std::size_t k = da - n + 1;  // quotient length
    if (k > n) {
      // too long for one pass: reduce the top part first
      ZnVec top(a.begin() + (da + 1 - 2 * n + 1), a.end());
      ZnVec low(a.begin(), a.begin() + (da + 1 - 2 * n + 1));
      top = reduce(top);
      // a = low + X^s * top
      std::size_t s = da + 1 - 2 * n + 1;
      ZnVec shifted(s + top.size(), 0);
      for (std::size_t i = 0; i < low.size(); ++i) shifted[i] = low[i];
      for (std::size_t i = 0; i < top.size(); ++i) shifted[s + i] = top[i];
      zn_trim(shifted);
      a = std::move(shifted);
      continue;
    }
    ZnVec rev_a(k);
    for (std::size_t i = 0; i < k; ++i) rev_a[i] = a[da - i];
    zn_trim(rev_a);
    ZnVec inv(inv_rev_.begin(), inv_rev_.begin() + std::min(k, inv_rev_.size()));
    zn_trim(inv);
    ZnVec qr = zn_mul(rev_a, inv, N_);
    if (qr.size() > k) qr.resize(k);
    ZnVec q(k, 0);
    for (std::size_t i = 0; i < qr.size(); ++i) q[k - 1 - i] = qr[i];
    zn_trim(q);
    ZnVec qm = zn_mul(q, m_, N_);
    a = zn_sub(a, qm, N_);
    if (a.size() > n) a.resize(n);  // exact: the top coefficients cancel
    zn_trim(a);
  }
  return a;
}

ZnVec ZnModulus::pow(const ZnVec& a, const Integer& e) const {
  if (e < 0) throw Error("domain", "negative exponent");
  ZnVec base = reduce(a), r = reduce(ZnVec{Integer(1)});
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = mul(r, r);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, base);
  }
  return r;
}

ZnVec ZnModulus::x_power(const Integer& e) const { return pow(ZnVec{Integer(0), Integer(1)}, e); }

ZnVec ZnModulus::compose(const ZnVec& a, const ZnVec& b) const {
  ZnVec r;
  ZnVec bb = reduce(b);
  for (std::size_t i = a.size(); i-- > 0;) {
    r = mul(r, bb);
    r = zn_add(r, ZnVec{a[i]}, N_);
  }
  return r;
}

ZnVec zn_power_sums(const ZnVec& f, int K, const Integer& N) {
  const int n = zn_degree(f);
  if (n < 0 || f.back() != 1) throw Error("domain", "power sums need a monic polynomial");
  auto c = [&](int i) -> Integer { return (i >= 0 && i <= n) ? f[i] : Integer(0); };
  ZnVec s(K + 1, 0);
  s[0] = n % N;
  for (int k = 1; k <= K; ++k) {
    Integer t = k <= n ? Integer(c(n - k) * k) : Integer(0);
    for (int i = 1; i < k && i <= n; ++i) t += c(n - i) * s[k - i];
    s[k] = mod(-t, N);
  }
  return s;
}

}  // namespace x1

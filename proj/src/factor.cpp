#include "x1/factor.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace x1 {

namespace {

bool poly_less(const GfPoly& a, const GfPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.size(); i-- > 0;) {
    auto ia = a[i].index(), ib = b[i].index();
    if (ia != ib) return ia < ib;
  }
  return false;
}

// p-th root of a polynomial whose derivative vanishes.
GfPoly pth_root(const GfPoly& f) {
  const GaloisField* F = f.lead().field();
  const std::uint64_t p = F->characteristic();
  const unsigned k = F->degree();
  std::vector<Gf> c;
  for (std::size_t i = 0; i < f.size(); i += p) c.push_back(f[i].frobenius(k - 1));
  return GfPoly(std::move(c));
}

GfPoly x_poly(const GaloisField* F) { return GfPoly::x(F->one()); }

}  // namespace

std::vector<std::pair<GfPoly, int>> squarefree_decomposition(const GfPoly& f_in) {
  if (f_in.is_zero()) throw Error("domain", "squarefree decomposition of zero");
  std::vector<std::pair<GfPoly, int>> out;
  GfPoly f = monic(f_in);
  const Gf one = f.lead().field()->one();
  const std::uint64_t p = f.lead().field()->characteristic();
  // Yun-style with handling of p-th powers.
  struct Item {
    GfPoly g;
    int mult;
  };
  std::vector<Item> stack{{f, 1}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (it.g.degree() < 1) continue;
    GfPoly d = it.g.derivative();
    if (d.is_zero()) {
      stack.push_back({pth_root(it.g), it.mult * static_cast<int>(p)});
      continue;
    }
    GfPoly c = gcd(it.g, d);
    GfPoly w = it.g / c;
    int i = 1;
    while (w.degree() > 0) {
      GfPoly y = gcd(w, c);
      GfPoly z = w / y;
      if (z.degree() > 0) out.emplace_back(monic(z), i * it.mult);
      ++i;
      w = y;
      c = c / y;
    }
    if (c.degree() > 0) stack.push_back({pth_root(monic(c)), it.mult * static_cast<int>(p)});
  }
  (void)one;
  return out;
}

std::vector<std::pair<GfPoly, int>> distinct_degree(const GfPoly& f_in) {
  std::vector<std::pair<GfPoly, int>> out;
  GfPoly f = monic(f_in);
  const GaloisField* F = f.lead().field();
  const Gf one = F->one();
  GfPoly x = x_poly(F);
  GfPoly h = x % f;
  const Integer& q = F->order();
  int d = 0;
  while (f.degree() >= 2 * (d + 1)) {
    ++d;
    h = powmod(h, q, f, one);
    GfPoly g = gcd(h - x, f);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f, f.degree());
  return out;
}

std::vector<GfPoly> equal_degree(const GfPoly& f_in, int d, std::mt19937_64& rng) {
  GfPoly f = monic(f_in);
  if (f.degree() == d) return {f};
  if (f.degree() <= 0) return {};
  const GaloisField* F = f.lead().field();
  const Gf one = F->one();
  const std::uint64_t p = F->characteristic();
  const Integer& q = F->order();
  for (;;) {
    std::vector<Gf> c;
    for (int i = 0; i < f.degree(); ++i) c.push_back(F->random(rng));
    GfPoly a(std::move(c));
    if (a.degree() < 1) continue;
    GfPoly b;
    if (p == 2) {
      // Trace map a + a^2 + ... + a^(2^(kd-1)) over F_2.
      GfPoly t = a % f, cur = t;
      const unsigned total = F->degree() * static_cast<unsigned>(d);
      for (unsigned i = 1; i < total; ++i) {
        cur = mulmod(cur, cur, f);
        t += cur;
      }
      b = t;
    } else {
      Integer e = (pow(q, static_cast<unsigned long>(d)) - 1) / 2;
      b = powmod(a, e, f, one) - GfPoly::constant(one);
    }
    GfPoly g = gcd(b, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      auto left = equal_degree(g, d, rng);
      auto right = equal_degree(f / g, d, rng);
      left.insert(left.end(), right.begin(), right.end());
      return left;
    }
  }
}

std::vector<Factor> poly_factor_ff(const GfPoly& f) {
  if (f.is_zero()) throw Error("domain", "cannot factor the zero polynomial");
  std::mt19937_64 rng(0x5eedf00dULL + static_cast<std::uint64_t>(f.degree()));
  std::vector<Factor> out;
  for (auto& [g, m] : squarefree_decomposition(f)) {
    for (auto& [h, d] : distinct_degree(g)) {
      for (auto& irr : equal_degree(h, d, rng)) out.push_back({irr, m});
    }
  }
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
    if (a.poly == b.poly) return a.multiplicity < b.multiplicity;
    return poly_less(a.poly, b.poly);
  });
  // Merge equal factors (possible across squarefree parts in characteristic p).
  std::vector<Factor> merged;
  for (auto& fa : out) {
    if (!merged.empty() && merged.back().poly == fa.poly)
      merged.back().multiplicity += fa.multiplicity;
    else
      merged.push_back(fa);
  }
  return merged;
}

std::vector<Gf> roots(const GfPoly& f) {
  if (f.is_zero()) throw Error("domain", "roots of the zero polynomial");
  if (f.degree() < 1) return {};
  const GaloisField* F = f.lead().field();
  const Gf one = F->one();
  GfPoly g = monic(f);
  GfPoly x = x_poly(F);
  // Product of the distinct linear factors: gcd(f, X^q - X).
  GfPoly xq = powmod(x, F->order(), g, one);
  GfPoly lin = gcd(xq - x, g);
  std::vector<Gf> out;
  if (lin.degree() < 1) return out;
  std::mt19937_64 rng(0xabcdefULL + static_cast<std::uint64_t>(f.degree()));
  for (auto& h : equal_degree(lin, 1, rng)) out.push_back(-h[0]);
  std::sort(out.begin(), out.end());
  return out;
}

bool is_squarefree(const GfPoly& f) {
  if (f.degree() < 1) return true;
  return gcd(f, f.derivative()).degree() == 0;
}

GfPoly minimal_polynomial_prime(const Gf& a) {
  const GaloisField* F = a.field();
  const GaloisField* P = GaloisField::get(F->characteristic(), 1);
  std::vector<Gf> conj{a};
  for (Gf c = a.frobenius(); c != a; c = c.frobenius()) conj.push_back(c);
  GfPoly m = from_roots(conj);
  std::vector<Gf> c;
  for (const auto& x : m.coeffs()) c.push_back(P->from_int(static_cast<std::int64_t>(x.to_u64())));
  return GfPoly(std::move(c));
}

GfPoly from_roots(const std::vector<Gf>& rts) {
  if (rts.empty()) throw Error("domain", "from_roots needs at least one root");
  GfPoly r = GfPoly::constant(rts[0].field()->one());
  for (const auto& a : rts) r *= GfPoly::linear(a);
  return r;
}

Embedding Embedding::find(const GaloisField* src, const GaloisField* dst) {
  if (src == dst) return identity(src);
  // fields are interned, so the smallest root is a stable choice worth keeping
  static std::mutex mu;
  static std::map<std::pair<const GaloisField*, const GaloisField*>, Embedding> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({src, dst});
    if (it != cache.end()) return it->second;
  }
  std::vector<Gf> m;
  for (auto c : src->modulus()) m.push_back(dst->from_int(static_cast<std::int64_t>(c)));
  auto rts = roots(GfPoly(std::move(m)));
  if (rts.empty()) throw Error("domain", "source field does not embed in target");
  Embedding e(src, dst, rts.front());
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(src, dst), e);
  return e;
}

std::vector<Integer> hensel_lift_roots(const ZPoly& f, std::uint64_t r, unsigned k) {
  const GaloisField* F = GaloisField::get(r, 1);
  GfPoly fr = reduce_poly(f, F);
  if (fr.degree() != f.degree())
    throw Error("bad-auxiliary-prime", "leading coefficient vanishes mod " + std::to_string(r) + "; choose another auxiliary prime");
  if (!is_squarefree(fr))
    throw Error("bad-auxiliary-prime", "polynomial not squarefree mod " + std::to_string(r) + "; choose another auxiliary prime");
  auto rts = roots(fr);
  if (static_cast<int>(rts.size()) != f.degree())
    throw Error("bad-auxiliary-prime", "polynomial does not split mod " + std::to_string(r) + "; choose another auxiliary prime");
  const Integer R = from_u64(r);
  const Integer target = pow(R, k);
  ZPoly df = f.derivative();
  std::vector<Integer> out;
  for (const auto& a0 : rts) {
    Integer a = from_u64(a0.to_u64());
    Integer m = R;
    Integer inv = invmod(x1::mod(df.eval(a), m), m);
    while (m < target) {
      Integer next = m * m;
      if (next > target) next = target;
      Integer d = x1::mod(df.eval(a), next);
      inv = x1::mod(inv * (2 - d * inv), next);
      a = x1::mod(a - f.eval(a) * inv, next);
      m = next;
    }
    out.push_back(a);
  }
  return out;
}

}  // namespace x1

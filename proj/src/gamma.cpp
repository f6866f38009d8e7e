#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "x1/galois.hpp"

namespace x1 {

GaloisRing::GaloisRing(const GaloisField* F, unsigned k)
    : F_(F), k_(k), d_(F->degree()), N_(pow(Integer(F->characteristic()), k)) {
  ZnVec m;
  for (auto c : F->modulus()) m.push_back(Integer(c));
  M_ = ZnModulus(N_, m);
}

ZnVec GaloisRing::from_gf(const Gf& a) const {
  ZnVec v;
  for (auto c : a.coeffs()) v.push_back(Integer(c));
  zn_trim(v);
  return v;
}

ZnVec GaloisRing::from_integer(const Integer& a) const {
  ZnVec v{mod(a, N_)};
  zn_trim(v);
  return v;
}

Gf GaloisRing::reduce(const ZnVec& a) const {
  const Integer r(F_->characteristic());
  std::vector<std::uint64_t> c;
  for (const auto& x : a) c.push_back(to_u64(mod(x, r)));
  return F_->from_coeffs(c);
}

ZnVec GaloisRing::inv(const ZnVec& a) const {
  Gf a0 = reduce(a);
  if (a0.is_zero()) throw Error("not-invertible", "Galois ring element is not a unit");
  ZnVec b = from_gf(a0.inv());
  const ZnVec two = from_integer(Integer(2));
  // Newton: b <- b (2 - a b), doubling the r-adic precision
  for (unsigned prec = 1; prec < k_; prec *= 2) b = mul(b, sub(two, mul(a, b)));
  return b;
}

Integer GaloisRing::to_integer(const ZnVec& a) const {
  if (zn_degree(a) > 0) throw Error("model-bug", "Galois ring element is not rational");
  return a.empty() ? Integer(0) : a[0];
}

ZnVec GaloisRing::eval(const ZPoly& f, const ZnVec& x) const {
  ZnVec r;
  for (int i = f.degree(); i >= 0; --i) r = add(mul(r, x), from_integer(f[i]));
  return r;
}

std::vector<ZnVec> hensel_lift_ring(const GaloisRing& R, const ZPoly& f, const std::vector<Gf>& roots) {
  const ZPoly df = f.derivative();
  std::vector<ZnVec> out;
  for (const auto& a0 : roots) {
    if (!R.reduce(R.eval(f, R.from_gf(a0))).is_zero()) throw Error("model-bug", "anchor value is not a root of P_iota");
    ZnVec a = R.from_gf(a0);
    for (unsigned prec = 1; prec < R.precision(); prec *= 2) a = R.sub(a, R.mul(R.eval(f, a), R.inv(R.eval(df, a))));
    if (!R.eval(f, a).empty()) throw Error("model-bug", "Hensel lifting did not converge");
    out.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// GL_2(F_ell)

namespace {

Mat2 mat_mul(const Mat2& x, const Mat2& y, std::uint64_t l) {
  return {(x[0] * y[0] + x[1] * y[2]) % l, (x[0] * y[1] + x[1] * y[3]) % l, (x[2] * y[0] + x[3] * y[2]) % l,
          (x[2] * y[1] + x[3] * y[3]) % l};
}

std::uint64_t mat_det(const Mat2& x, std::uint64_t l) { return (x[0] * x[3] % l + l * l - x[1] * x[2] % l) % l; }

Mat2 mat_inv(const Mat2& x, std::uint64_t l) {
  const std::uint64_t di = invmod_u64(mat_det(x, l), l);
  return {x[3] * di % l, (l - x[1]) % l * di % l, (l - x[2]) % l * di % l, x[0] * di % l};
}

}  // namespace

std::vector<ConjugacyClass> gl2_classes(std::uint64_t ell) {
  std::vector<Mat2> group;
  for (std::uint64_t i = 0; i < ell * ell * ell * ell; ++i) {
    Mat2 m{i % ell, i / ell % ell, i / (ell * ell) % ell, i / (ell * ell * ell)};
    if (mat_det(m, ell)) group.push_back(m);
  }
  std::set<Mat2> assigned;
  std::vector<ConjugacyClass> out;
  for (const auto& m : group) {
    if (assigned.count(m)) continue;
    std::set<Mat2> orbit;
    for (const auto& g : group) orbit.insert(mat_mul(mat_mul(g, m, ell), mat_inv(g, ell), ell));
    ConjugacyClass C;
    C.rep = m;
    C.members.assign(orbit.begin(), orbit.end());
    C.trace = (m[0] + m[3]) % ell;
    C.det = mat_det(m, ell);
    assigned.insert(orbit.begin(), orbit.end());
    out.push_back(std::move(C));
  }
  return out;
}

std::size_t class_of(const std::vector<ConjugacyClass>& classes, const Mat2& m, std::uint64_t ell) {
  Mat2 r{m[0] % ell, m[1] % ell, m[2] % ell, m[3] % ell};
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (std::binary_search(classes[i].members.begin(), classes[i].members.end(), r)) return i;
  throw Error("domain", "matrix is not invertible");
}

// ---------------------------------------------------------------------------
// Gamma_C

namespace {

std::vector<ZPoly> h_candidates() {
  std::vector<ZPoly> out;
  for (int deg = 1; deg <= 4; ++deg)
    for (unsigned mask = 0; mask < (1u << (deg - 1)); ++mask) {
      std::vector<Integer> c(deg + 1, 0);
      c[deg] = 1;
      for (int i = 1; i < deg; ++i) c[i] = (mask >> (i - 1)) & 1;
      out.push_back(ZPoly(std::move(c)));
    }
  return out;
}

// log10 of Fujiwara's bound 2 max |z_(n-k) / z_n|^(1/k) on the roots of Z.
double root_bound_log10(const ZPoly& Z) {
  const int n = Z.degree();
  const double lc = log_abs(Z.lead());
  double best = -1e9;
  for (int k = 1; k <= n; ++k) {
    if (Z[n - k] == 0) continue;
    double t = log_abs(Z[n - k]) - lc;
    if (k == n) t -= std::log(2.0);
    best = std::max(best, t / k);
  }
  return std::log10(2.0) + best / std::log(10.0);
}

void say(const GammaOptions& opt, const std::string& s) {
  if (opt.log) opt.log(s);
}

ZPoly primitive(std::vector<Integer> c) {
  Integer g = 0;
  for (const auto& x : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g == 0) return ZPoly();
  for (auto& x : c) x /= g;
  if (c.back() < 0)
    for (auto& x : c) x = -x;
  return ZPoly(std::move(c));
}

}  // namespace

FrobeniusClassData gamma_polys(const IotaPolynomial& iota, const GammaOptions& opt) {
  const HeckeEigenSystem& sys = *iota.sys;
  const std::uint64_t ell = sys.ell;
  const ZPoly& Z = iota.Z;
  const Integer L = Z.lead();
  FrobeniusClassData D;
  D.sys = &sys;
  D.classes = gl2_classes(ell);
  std::size_t max_class = 0;
  for (const auto& C : D.classes) max_class = std::max(max_class, C.members.size());
  const double B = std::max(0.0, root_bound_log10(Z));  // max(1, bound)
  const double lcd = log_abs(L) / std::log(10.0);

  for (const ZPoly& h : h_candidates()) {
    const int e = h.degree() + 1;  // L^e s_sigma is integral
    // |e_j(s)| <= binom(|C|, j) S^j with S = (|F|^2 - 1) max|h(a)| B
    const double S = std::log10(static_cast<double>(ell * ell)) + std::log10(static_cast<double>(h.degree() + 1)) +
                     (h.degree() + 1) * B;
    const double need = max_class * (S + e * lcd + std::log10(2.0)) + 1;
    unsigned k = opt.precision;
    if (!k) k = static_cast<unsigned>(std::ceil(need / std::log10(static_cast<double>(iota.r)))) + 2;
    if (k > opt.max_precision) throw Error("precision", "Gamma precision exceeds the cap");
    say(opt, "h degree " + std::to_string(h.degree()) + ": precision " + std::to_string(k) + " digits base " +
                 std::to_string(iota.r));
    auto resolvents = [&](const GaloisRing& R, std::vector<std::vector<ZnVec>>& values) {
      std::vector<ZnVec> a(ell * ell);
      std::vector<Gf> r0(iota.anchor_values.begin() + 1, iota.anchor_values.end());
      auto lifted = hensel_lift_ring(R, Z, r0);
      for (std::size_t i = 1; i < ell * ell; ++i) a[i] = std::move(lifted[i - 1]);
      std::vector<ZnVec> ha(ell * ell);
      for (std::size_t i = 1; i < ell * ell; ++i) ha[i] = R.eval(h, a[i]);
      const ZnVec Le = R.from_integer(pow(L, e));
      // resolvents scaled by L^e, which makes them integral
      std::map<ZnVec, std::size_t> owner;
      values.assign(D.classes.size(), {});
      for (std::size_t ci = 0; ci < D.classes.size(); ++ci) {
        for (const auto& s : D.classes[ci].members) {
          ZnVec acc;
          for (std::uint64_t x = 0; x < ell; ++x)
            for (std::uint64_t y = 0; y < ell; ++y) {
              if (!x && !y) continue;
              const std::uint64_t img = ((s[0] * x + s[1] * y) % ell) * ell + (s[2] * x + s[3] * y) % ell;
              acc = R.add(acc, R.mul(ha[x * ell + y], a[img]));
            }
          acc = R.mul(acc, Le);
          auto [it, fresh] = owner.emplace(acc, ci);
          if (!fresh && it->second != ci) return false;
          values[ci].push_back(std::move(acc));
        }
      }
      return true;
    };
    std::vector<std::vector<ZnVec>> values;
    // a collision modulo r^8 already rules h out in practice
    if (!resolvents(GaloisRing(iota.anchor_field, std::min(k, 8u)), values) ||
        !resolvents(GaloisRing(iota.anchor_field, k), values)) {
      say(opt, "resolvent collision, next h");
      continue;
    }
    GaloisRing R(iota.anchor_field, k);
    const Integer N = R.modulus(), half = N / 2;
    D.gamma.clear();
    for (std::size_t ci = 0; ci < D.classes.size(); ++ci) {
      // prod (X - L^e s) has integer coefficients
      std::vector<ZnVec> poly{R.from_integer(Integer(1))};
      for (const auto& v : values[ci]) {
        std::vector<ZnVec> next(poly.size() + 1);
        for (std::size_t j = 0; j < poly.size(); ++j) {
          next[j + 1] = R.add(next[j + 1], poly[j]);
          next[j] = R.sub(next[j], R.mul(poly[j], v));
        }
        poly = std::move(next);
      }
      std::vector<Integer> c;
      for (const auto& x : poly) {
        Integer z = R.to_integer(x);
        if (z > half) z -= N;
        c.push_back(z);
      }
      // G(X) = L^(e |C|) Gamma_C(X / L^e) rescaled back: Gamma_C(X) ~ prod (L^e X - L^e s)
      const std::size_t n = c.size() - 1;
      std::vector<Integer> g(n + 1);
      Integer Lp = 1;
      const Integer Le_int = pow(L, e);
      for (std::size_t j = 0; j <= n; ++j) {
        g[j] = c[j] * Lp;
        Lp *= Le_int;
      }
      D.gamma.push_back(primitive(std::move(g)));
    }
    D.h = h;
    D.precision = k;
    return D;
  }
  throw Error("resolvent-collision", "no auxiliary h separates the classes");
}

std::vector<std::size_t> vanishing_classes(const FrobeniusClassData& data, const IotaPolynomial& iota, const Integer& p,
                                           Integer* resolvent) {
  const std::uint64_t ell = data.sys->ell;
  if (mod(Integer(data.sys->level) * Integer(ell) * iota.Z.lead(), p) == 0)
    throw Error("bad-prime", "p divides n ell or the denominator of P_iota");
  ZnVec Zp = zn_reduce(std::vector<Integer>(iota.Z.coeffs().begin(), iota.Z.coeffs().end()), p);
  Zp = zn_scale(Zp, invmod(Zp.back(), p), p);
  ZnModulus Mod(p, Zp);
  ZnVec xp = Mod.x_power(p);
  ZnVec hx = zn_reduce(std::vector<Integer>(data.h.coeffs().begin(), data.h.coeffs().end()), p);
  ZnVec g = Mod.mul(hx, xp);
  ZnVec s = zn_power_sums(Zp, Zp.size() - 2, p);
  Integer u = 0;
  for (std::size_t j = 0; j < g.size(); ++j) u = mod(u + g[j] * s[j], p);
  if (resolvent) *resolvent = u;
  std::vector<std::size_t> out;
  for (std::size_t ci = 0; ci < data.classes.size(); ++ci) {
    const ZPoly& G = data.gamma[ci];
    Integer v = 0;
    for (int j = G.degree(); j >= 0; --j) v = mod(v * u + G[j], p);
    if (v == 0) out.push_back(ci);
  }
  return out;
}

FrobeniusClass frobenius_class_large_p(const FrobeniusClassData& data, const IotaPolynomial& iota, const Integer& p) {
  FrobeniusClass out;
  auto hits = vanishing_classes(data, iota, p, &out.resolvent);
  if (hits.size() != 1) throw Error("ambiguous-class", std::to_string(hits.size()) + " classes vanish at the resolvent");
  out.index = hits[0];
  const auto& C = data.classes[out.index];
  out.rep = C.rep;
  out.trace = C.trace;
  out.det = C.det;
  return out;
}

std::string serialize_gamma(const FrobeniusClassData& D) {
  std::ostringstream out;
  out << "format: x1-gamma 1\n";
  out << "system: " << D.sys->describe() << "\n";
  out << "h:";
  for (std::size_t i = 0; i < D.h.size(); ++i) out << " " << D.h[i].get_str();
  out << "\n";
  out << "precision: " << D.precision << "\n";
  for (std::size_t ci = 0; ci < D.classes.size(); ++ci) {
    const auto& r = D.classes[ci].rep;
    out << "class " << ci << ": " << r[0] << " " << r[1] << " " << r[2] << " " << r[3] << " |";
    for (std::size_t j = 0; j < D.gamma[ci].size(); ++j) out << " " << D.gamma[ci][j].get_str();
    out << "\n";
  }
  return out.str();
}

FrobeniusClassData parse_gamma(const HeckeEigenSystem& sys, const std::string& text) {
  FrobeniusClassData D;
  D.sys = &sys;
  D.classes = gl2_classes(sys.ell);
  D.gamma.resize(D.classes.size());
  std::stringstream in(text);
  std::string line;
  bool format = false, system = false;
  std::vector<bool> seen(D.classes.size(), false);
  auto ints = [](const std::string& s) {
    std::vector<Integer> v;
    std::stringstream ss(s);
    std::string tok;
    while (ss >> tok) v.push_back(Integer(tok));
    return v;
  };
  while (std::getline(in, line)) {
    auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    std::string key = line.substr(0, colon), val = line.substr(colon + 2);
    if (key == "format") format = val == "x1-gamma 1";
    else if (key == "system") system = val == sys.describe();
    else if (key == "h") D.h = ZPoly(ints(val));
    else if (key == "precision") D.precision = static_cast<unsigned>(std::stoul(val));
    else if (key.rfind("class ", 0) == 0) {
      std::size_t ci = std::stoul(key.substr(6));
      auto bar = val.find('|');
      if (ci >= D.classes.size() || bar == std::string::npos) throw Error("parse", "bad class line");
      auto rep = ints(val.substr(0, bar));
      if (rep.size() != 4) throw Error("parse", "bad class representative");
      Mat2 m{to_u64(rep[0]), to_u64(rep[1]), to_u64(rep[2]), to_u64(rep[3])};
      if (class_of(D.classes, m, sys.ell) != ci) throw Error("parse", "class order differs");
      D.gamma[ci] = ZPoly(ints(val.substr(bar + 1)));
      seen[ci] = true;
    }
  }
  if (!format) throw Error("parse", "expected record format x1-gamma 1");
  if (!system) throw Error("parse", "gamma record belongs to another system");
  for (bool b : seen)
    if (!b) throw Error("parse", "gamma record is missing a class");
  return D;
}

}  // namespace x1

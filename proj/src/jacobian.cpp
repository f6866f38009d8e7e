#include "x1/jacobian.hpp"

#include <set>
#include <sstream>

#include "x1/factor.hpp"

namespace x1 {

bool operator<(const MumfordDivisor& x, const MumfordDivisor& y) {
  if (x.a != y.a) return x.a < y.a;
  if (x.b != y.b) return x.b < y.b;
  auto key = [](const GfPoly& p) {
    std::vector<std::uint64_t> k{static_cast<std::uint64_t>(p.degree() + 1)};
    for (std::size_t i = 0; i < p.size(); ++i)
      for (auto c : p[i].coeffs()) k.push_back(c);
    return k;
  };
  auto ku = key(x.u), kv = key(y.u);
  if (ku != kv) return ku < kv;
  return key(x.v) < key(y.v);
}

Jacobian::Jacobian(const CurveModel& M, const GaloisField* F) : M_(&M), F_(F), g_(M.genus) {
  if (!M.has_jacobian()) throw Error("unsupported", "Jacobian arithmetic needs a split hyperelliptic model");
  h_ = M.h_over(F);
  f_ = M.f_over(F);
  if (h_.degree() != static_cast<int>(g_ + 1) || f_.degree() >= h_.degree())
    throw Error("bad-prime", "model degenerates at this characteristic");
  e_minus_ = h_.degree() - f_.degree();
}

MumfordDivisor Jacobian::identity() const { return {GfPoly::constant(F_->one()), GfPoly(), 0, 0}; }

MumfordDivisor Jacobian::reduce(GfPoly u, GfPoly v, int a, int b) const {
  const int g = static_cast<int>(g_);
  u = monic(u);
  v = v % u;
  auto step = [&](const GfPoly& vc) {
    const GfPoly hv = h_ + vc;
    const int pplus = hv.is_zero() ? -e_minus_ : hv.degree();
    const int pminus = vc.is_zero() ? -e_minus_ : vc.degree();
    auto [q, r] = divrem(f_ - h_ * vc - vc * vc, u);
    if (!r.is_zero()) throw Error("model-bug", "Mumford relation fails during reduction");
    GfPoly u2 = monic(q);
    if (pplus + pminus != u.degree() + u2.degree()) throw Error("model-bug", "pole orders do not balance");
    a += pplus - u2.degree();
    b += pminus - u2.degree();
    v = (-h_ - vc) % u2;
    u = std::move(u2);
  };
  while (u.degree() > g) step(v);
  for (;;) {
    if (b < 0)
      step(((h_ + v) % u) - h_);
    else if (a < -g)
      step(v);
    else
      break;
  }
  return {u, v, a, b};
}

MumfordDivisor Jacobian::add(const MumfordDivisor& x, const MumfordDivisor& y) const {
  const Gf one = F_->one();
  auto [d0, e1, e2] = xgcd(x.u, y.u, one);
  GfPoly u, v;
  int dd = 0;
  if (d0.degree() == 0) {
    u = x.u * y.u;
    v = (e1 * x.u * y.v + e2 * y.u * x.v) % u;
  } else {
    auto [d, c1, c2] = xgcd(d0, x.v + y.v + h_, one);
    GfPoly s1 = c1 * e1, s2 = c1 * e2, s3 = c2;
    dd = d.degree();
    u = (x.u * y.u) / (d * d);
    GfPoly num = s1 * x.u * y.v + s2 * y.u * x.v + s3 * (x.v * y.v + f_);
    auto [q, r] = divrem(num, d);
    if (!r.is_zero()) throw Error("model-bug", "composition is not exact");
    v = q % u;
  }
  return reduce(u, v, x.a + y.a + dd, x.b + y.b + dd);
}

MumfordDivisor Jacobian::neg(const MumfordDivisor& x) const {
  const int du = x.u.degree();
  return reduce(x.u, (-h_ - x.v) % x.u, -x.a - du, -x.b - du);
}

MumfordDivisor Jacobian::mul(const MumfordDivisor& x, const Integer& k) const {
  if (k < 0) return mul(neg(x), -k);
  MumfordDivisor r = identity();
  const std::size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = add(r, r);
    if (mpz_tstbit(k.get_mpz_t(), i)) r = add(r, x);
  }
  return r;
}

MumfordDivisor Jacobian::from_point(const CurvePoint& Q) const {
  if (Q.x.field() != F_) throw Error("domain", "point over a different field");
  return reduce(GfPoly::linear(Q.x), GfPoly::constant(Q.y), -1, 0);
}

MumfordDivisor Jacobian::inf_minus() const { return reduce(GfPoly::constant(F_->one()), GfPoly(), -1, 1); }

MumfordDivisor Jacobian::random_point(std::mt19937_64& rng) const {
  MumfordDivisor acc = identity();
  for (unsigned i = 0; i < g_;) {
    Gf x = F_->random(rng);
    auto ys = roots(GfPoly(std::vector<Gf>{-f_.eval(x), h_.eval(x), F_->one()}));
    if (ys.empty()) continue;
    acc = add(acc, from_point({x, ys[rng() % ys.size()]}));
    ++i;
  }
  return acc;
}

bool Jacobian::is_valid(const MumfordDivisor& x) const {
  if (!x.u.is_monic() || x.u.degree() > static_cast<int>(g_)) return false;
  if (x.v.degree() >= x.u.degree()) return false;
  if (x.b < 0 || x.a < -static_cast<int>(g_) || x.a + x.b + x.u.degree() != 0) return false;
  return ((x.v * x.v + h_ * x.v - f_) % x.u).is_zero();
}

MumfordDivisor Jacobian::frobenius(const MumfordDivisor& x, unsigned times) const {
  return {frobenius_poly(x.u, times), frobenius_poly(x.v, times), x.a, x.b};
}

MumfordDivisor Jacobian::map(const MumfordDivisor& x, const Embedding& e) const {
  return {e.map(x.u), e.map(x.v), x.a, x.b};
}

std::optional<MumfordDivisor> Jacobian::descend(const MumfordDivisor& x, const Embedding& e) const {
  auto down = [&](const GfPoly& p) -> std::optional<GfPoly> {
    std::vector<Gf> c;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!e.in_image(p[i])) return std::nullopt;
      c.push_back(e.preimage(p[i]));
    }
    return GfPoly(std::move(c));
  };
  auto u = down(x.u), v = down(x.v);
  if (!u || !v) return std::nullopt;
  return MumfordDivisor{*u, *v, x.a, x.b};
}

Gf Jacobian::iota(const MumfordDivisor& x) const {
  if (x.a + static_cast<int>(g_) > 0 && x.a + x.b + x.u.degree() != 0)
    throw Error("bad-evaluation-point", "representative meets the pole of psi");
  // trace of v in F_q[x]/(u) from the power sums of the roots of u
  const int n = x.u.degree();
  std::vector<Gf> s(n + 1, F_->zero());
  s[0] = F_->from_int(n);
  for (int k = 1; k < n; ++k) {
    Gf t = F_->from_int(k) * x.u[n - k];
    for (int i = 1; i < k; ++i) t += x.u[n - i] * s[k - i];
    s[k] = -t;
  }
  Gf r = F_->zero();
  for (std::size_t j = 0; j < x.v.size(); ++j) r += x.v[j] * s[j];
  return r;
}

namespace {

std::string gf_text(const Gf& a) {
  std::string out;
  const auto& c = a.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + std::to_string(c[i]);
  return out.empty() ? "0" : out;
}

Gf gf_parse(const GaloisField* F, const std::string& s) {
  std::vector<std::uint64_t> c;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) c.push_back(std::stoull(tok));
  return F->from_coeffs(c);
}

std::string poly_text(const GfPoly& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? " " : "") + gf_text(p[i]);
  return out;
}

GfPoly poly_parse(const GaloisField* F, const std::string& s) {
  std::vector<Gf> c;
  std::stringstream ss(s);
  std::string tok;
  while (ss >> tok) c.push_back(gf_parse(F, tok));
  return GfPoly(std::move(c));
}

}  // namespace

std::string Jacobian::to_string(const MumfordDivisor& x) const {
  return "u=" + poly_text(x.u) + ";v=" + poly_text(x.v) + ";a=" + std::to_string(x.a) + ";b=" + std::to_string(x.b);
}

MumfordDivisor Jacobian::parse(const std::string& s) const {
  MumfordDivisor x;
  std::stringstream ss(s);
  std::string part;
  bool seen[4] = {false, false, false, false};
  while (std::getline(ss, part, ';')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw Error("parse", "bad divisor field " + part);
    std::string k = part.substr(0, eq), v = part.substr(eq + 1);
    if (k == "u") x.u = poly_parse(F_, v), seen[0] = true;
    else if (k == "v") x.v = poly_parse(F_, v), seen[1] = true;
    else if (k == "a") x.a = std::stoi(v), seen[2] = true;
    else if (k == "b") x.b = std::stoi(v), seen[3] = true;
    else throw Error("parse", "bad divisor field " + k);
  }
  for (bool b : seen)
    if (!b) throw Error("parse", "incomplete divisor " + s);
  if (!is_valid(x)) throw Error("parse", "divisor is not in canonical form");
  return x;
}

// ---------------------------------------------------------------------------
// orders

ZPoly frobenius_numerator(const CurveModel& M, std::uint64_t p) {
  if (pow(Integer(p), M.genus) <= Integer(10000000)) return zeta_naive(M, p).numerator;
  // Eichler-Shimura: det(t^2 - t T_p + p <p>) on the symbol space is P(t)^2.
  auto S = ModularSymbolSpace::build(M.level);
  const ZMatrix T = S->hecke_matrix(static_cast<unsigned>(p));
  const ZMatrix D = S->diamond_matrix(static_cast<long>(p % M.level));
  const std::size_t r = S->dimension();
  const ZMatrix I = ZMatrix::identity(r, Integer(0), Integer(1));
  const std::size_t deg = 2 * r;
  QPoly L;
  for (std::size_t i = 0; i <= deg; ++i) {
    Integer t = static_cast<long>(i);
    QPoly term = QPoly::constant(Rational(determinant(I * (t * t) - T * t + D * Integer(p))));
    for (std::size_t j = 0; j <= deg; ++j) {
      if (j == i) continue;
      term = term * QPoly(std::vector<Rational>{Rational(-static_cast<long>(j)), Rational(1)});
      term = term * Rational(Rational(1) / Rational(static_cast<long>(i) - static_cast<long>(j)));
    }
    L = L + term;
  }
  return sqrt_poly(clear_denominators(L));
}

Integer jacobian_order(const CurveModel& M, std::uint64_t p, unsigned d) {
  ZetaData z;
  z.p = p;
  z.genus = M.genus;
  z.numerator = frobenius_numerator(M, p);
  return z.jacobian_order(d);
}

// ---------------------------------------------------------------------------
// Hecke action

std::optional<MumfordDivisor> hecke_naive(const Jacobian& J, const MumfordDivisor& x, unsigned k) {
  const CurveModel& M = J.model();
  const GaloisField* F = J.field();
  const std::uint64_t p = F->characteristic();
  MumfordDivisor acc = J.identity();
  for (const auto& fac : poly_factor_ff(x.u)) {
    const unsigned e = static_cast<unsigned>(fac.poly.degree());
    const GaloisField* Fe = GaloisField::get(p, F->degree() * e);
    Embedding up = Embedding::find(F, Fe);
    Gf alpha = roots(up.map(fac.poly)).front();
    CurvePoint Q{alpha, up.map(x.v).eval(alpha)};
    if (M.is_rational_cusp(Q)) continue;
    HeckeImage img;
    try {
      img = hecke_image_point(M, Q, k);
    } catch (const Error& err) {
      if (err.code() == "cusp") return std::nullopt;
      throw;
    }
    Jacobian JL(M, img.field);
    MumfordDivisor c = JL.identity();
    for (const auto& R : img.points) c = JL.add(c, JL.from_point(R));
    MumfordDivisor orbit = c;
    for (unsigned i = 1; i < e; ++i) orbit = JL.add(orbit, JL.frobenius(c, F->degree() * i));
    auto down = J.descend(orbit, up.then(img.embedding));
    if (!down) throw Error("model-bug", "Hecke image of a Galois orbit is not rational");
    acc = J.add(acc, J.mul(*down, fac.multiplicity));
  }
  return acc;
}

MumfordDivisor hecke_on_torsion(const Jacobian& J, const MumfordDivisor& x, unsigned k, std::uint64_t ell,
                                std::mt19937_64& rng) {
  const Integer E = J.model().rational_torsion;
  if (E <= 0) throw Error("unsupported", "model lacks the rational torsion exponent");
  if (E % Integer(ell) == 0) throw Error("unsupported", "ell divides the rational torsion");
  const Integer m = E * invmod(E, Integer(ell));
  if (auto t = hecke_naive(J, x, k)) return J.mul(*t, m);
  for (int attempt = 0; attempt < 20; ++attempt) {
    MumfordDivisor R = J.random_point(rng);
    auto a = hecke_naive(J, J.add(x, R), k);
    auto b = hecke_naive(J, R, k);
    if (a && b) return J.mul(J.sub(*a, *b), m);
  }
  throw Error("retry-budget", "support keeps meeting non-rational cusps");
}

// ---------------------------------------------------------------------------
// torsion basis

DefinitionField definition_field(const HeckeEigenSystem& sys, std::uint64_t p) {
  if (p == sys.ell || p % sys.level == 0) throw Error("bad-prime", "p divides n ell");
  const GaloisField* F = sys.field;
  DefinitionField out;
  out.F = GfPoly(std::vector<Gf>{sys.character(static_cast<std::int64_t>(p % sys.level)) * F->from_integer(Integer(p)),
                                 -sys.eigenvalue(p), F->one()});
  if (out.F[0].is_zero()) return out;
  const Integer qf = F->order();
  const Integer bound = qf * qf * qf;
  GfPoly X = GfPoly::monomial(F->one(), 1), r = X % out.F;
  for (unsigned k = 1; Integer(k) <= bound; ++k) {
    if (r == GfPoly::constant(F->one())) {
      out.degree = k;
      break;
    }
    r = (r * X) % out.F;
  }
  out.order_ok = out.degree > 0 && Integer(out.degree) <= qf - 1;
  return out;
}

MumfordDivisor ell_torsion_point(const Jacobian& J, const Integer& order, std::uint64_t ell, std::mt19937_64& rng) {
  Integer cofactor = order;
  int v = 0;
  while (cofactor % Integer(ell) == 0) cofactor /= Integer(ell), ++v;
  if (v == 0) throw Error("retry-budget", "ell does not divide #J");
  for (int attempt = 0; attempt < 20; ++attempt) {
    MumfordDivisor P = J.mul(J.random_point(rng), cofactor);
    if (P.is_identity()) continue;
    for (;;) {
      MumfordDivisor Q = J.mul(P, Integer(ell));
      if (Q.is_identity()) return P;
      P = Q;
    }
  }
  throw Error("retry-budget", "no ell-torsion point found");
}

std::vector<MumfordDivisor> ell_torsion_basis(const Jacobian& J, const Integer& order, std::uint64_t ell,
                                             std::mt19937_64& rng) {
  Integer cofactor = order;
  int v = 0;
  while (cofactor % Integer(ell) == 0) cofactor /= Integer(ell), ++v;
  const Integer L(ell);
  // Generators g_i of order ell^e_i whose tops ell^(e_i - 1) g_i are
  // independent, so that they generate a direct sum.
  struct Gen {
    MumfordDivisor g, top;
    int e;
  };
  std::vector<Gen> gens;
  std::map<MumfordDivisor, std::vector<std::uint64_t>> table;
  auto rebuild = [&] {
    table.clear();
    std::vector<std::pair<MumfordDivisor, std::vector<std::uint64_t>>> cur{{J.identity(), {}}};
    for (const auto& G : gens) {
      std::vector<std::pair<MumfordDivisor, std::vector<std::uint64_t>>> next;
      for (const auto& [x, c] : cur) {
        MumfordDivisor y = x;
        for (std::uint64_t k = 0; k < ell; ++k, y = J.add(y, G.top)) {
          auto ck = c;
          ck.push_back(k);
          next.emplace_back(y, std::move(ck));
        }
      }
      cur = std::move(next);
    }
    for (auto& [x, c] : cur) table.emplace(std::move(x), std::move(c));
  };
  auto total = [&] {
    int t = 0;
    for (const auto& G : gens) t += G.e;
    return t;
  };
  rebuild();
  std::vector<MumfordDivisor> pending;
  for (int drawn = 0; total() < v;) {
    if (pending.empty()) {
      if (++drawn > 200) throw Error("retry-budget", "random points do not generate the ell-Sylow subgroup");
      pending.push_back(J.mul(J.random_point(rng), cofactor));
    }
    MumfordDivisor R = pending.back();
    pending.pop_back();
    for (;;) {
      int t = 0;
      MumfordDivisor top, T = R;
      while (!T.is_identity()) top = T, T = J.mul(T, L), ++t;
      if (t == 0) break;
      auto it = table.find(top);
      if (it == table.end()) {
        gens.push_back({R, top, t});
        rebuild();
        break;
      }
      const auto& c = it->second;
      int low = -1;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (c[i] == 0) continue;
        if (gens[i].e >= t)
          R = J.sub(R, J.mul(gens[i].g, Integer(c[i]) * pow(L, gens[i].e - t)));
        else if (low < 0 || gens[i].e > gens[low].e)
          low = static_cast<int>(i);
      }
      if (low < 0) continue;
      // R now has a top involving generators of smaller order: swap it in.
      pending.push_back(gens[low].g);
      MumfordDivisor Rt = R;
      for (int i = 1; i < t; ++i) Rt = J.mul(Rt, L);
      gens[low] = {R, Rt, t};
      rebuild();
      break;
    }
  }
  std::vector<MumfordDivisor> out;
  for (const auto& G : gens) out.push_back(G.top);
  return out;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> TorsionBasis::coordinates(const MumfordDivisor& D) const {
  const std::uint64_t ell = sys->ell;
  for (std::uint64_t i = 0; i < span.size(); ++i)
    if (span[i] == D) return std::make_pair(i / ell, i % ell);
  return std::nullopt;
}

namespace {

const ProjectorData& projector_for(const HeckeEigenSystem& sys, unsigned k) {
  for (const auto& pd : sys.projectors)
    if (pd.k == k) return pd;
  throw Error("model-bug", "no projector data for T_" + std::to_string(k));
}

// B(T_k) x with B over the prime field, by Horner.
MumfordDivisor apply_poly(const Jacobian& J, const GfPoly& B, unsigned k, const MumfordDivisor& x, std::uint64_t ell,
                          std::mt19937_64& rng) {
  MumfordDivisor r = J.identity();
  for (int i = B.degree(); i >= 0; --i) {
    r = hecke_on_torsion(J, r, k, ell, rng);
    r = J.add(r, J.mul(x, Integer(B[i].to_u64())));
  }
  return r;
}

std::vector<MumfordDivisor> build_span(const Jacobian& J, const MumfordDivisor& P1, const MumfordDivisor& P2,
                                       std::uint64_t ell) {
  std::vector<MumfordDivisor> span(ell * ell);
  MumfordDivisor row = J.identity();
  for (std::uint64_t x = 0; x < ell; ++x) {
    MumfordDivisor cur = row;
    for (std::uint64_t y = 0; y < ell; ++y) {
      span[x * ell + y] = cur;
      cur = J.add(cur, P2);
    }
    row = J.add(row, P1);
  }
  return span;
}

void fill_action(const Jacobian& J, TorsionBasis& B, std::mt19937_64& rng) {
  const std::uint64_t ell = B.sys->ell;
  for (unsigned k : B.sys->optimal) {
    std::array<std::uint64_t, 4> m{};
    const MumfordDivisor* Ps[2] = {&B.P1, &B.P2};
    for (int j = 0; j < 2; ++j) {
      auto c = B.coordinates(hecke_on_torsion(J, *Ps[j], k, ell, rng));
      if (!c) throw Error("model-bug", "T_k leaves the span of the basis");
      m[0 * 2 + j] = c->first;
      m[1 * 2 + j] = c->second;
    }
    B.action[k] = m;
  }
}

}  // namespace

TorsionBasis jm_basis(const CurveModel& M, const HeckeEigenSystem& sys, std::uint64_t p, std::uint64_t seed) {
  if (sys.residue_degree() != 1) throw Error("unsupported", "torsion bases need a prime residue field");
  DefinitionField df = definition_field(sys, p);
  if (!df.order_ok) throw Error("bad-prime", "definition field order test fails at p = " + std::to_string(p));
  const std::uint64_t ell = sys.ell;
  const GaloisField* K = GaloisField::get(p, df.degree);
  Jacobian J(M, K);
  const Integer N = jacobian_order(M, p, df.degree);
  if (N % Integer(ell * ell) != 0) throw Error("bad-prime", "ell^2 does not divide #J(F_q)");
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + p);
  TorsionBasis B;
  B.sys = &sys;
  B.p = p;
  B.field = K;
  bool have1 = false;
  std::vector<MumfordDivisor> line;  // span of P1
  auto project = [&](MumfordDivisor R) {
    for (unsigned k : sys.optimal) R = apply_poly(J, projector_for(sys, k).B, k, R, ell, rng);
    // adjustment: walk down (T_k - a_k) until it annihilates
    for (int guard = 0;; ++guard) {
      if (guard > 64) throw Error("model-bug", "adjustment loop does not terminate");
      bool changed = false;
      for (unsigned k : sys.optimal) {
        if (R.is_identity()) break;
        MumfordDivisor S = J.sub(hecke_on_torsion(J, R, k, ell, rng), J.mul(R, Integer(sys.a[k].to_u64())));
        if (!S.is_identity()) R = S, changed = true;
      }
      if (!changed) break;
    }
    return R;
  };
  // true once the basis is complete
  auto offer = [&](const MumfordDivisor& R) {
    if (R.is_identity()) return false;
    if (!have1) {
      B.P1 = R;
      have1 = true;
      MumfordDivisor c = J.identity();
      for (std::uint64_t i = 0; i < ell; ++i, c = J.add(c, R)) line.push_back(c);
      return false;
    }
    for (const auto& c : line)
      if (c == R) return false;
    B.P2 = R;
    return true;
  };
  auto finish = [&]() {
    B.span = build_span(J, B.P1, B.P2, ell);
    std::set<MumfordDivisor> distinct(B.span.begin(), B.span.end());
    if (distinct.size() != ell * ell) throw Error("model-bug", "basis span has repeated elements");
    fill_action(J, B, rng);
    return B;
  };
  for (int attempt = 0; attempt < 10; ++attempt)
    if (offer(project(ell_torsion_point(J, N, ell, rng)))) return finish();
  // Repeated ell-multiplication only reaches the ell-torsion of the largest
  // cyclic factors; project a full basis of J(F_q)[ell] instead.
  std::vector<MumfordDivisor> images;
  for (const auto& x : ell_torsion_basis(J, N, ell, rng)) {
    images.push_back(project(x));
    if (offer(images.back())) return finish();
  }
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      for (std::uint64_t c = 1; c < ell; ++c)
        if (offer(project(J.add(images[i], J.mul(images[j], Integer(c)))))) return finish();
  throw Error("eigenspace-not-reached", "projection annihilated every attempt at p = " + std::to_string(p));
}

std::array<std::uint64_t, 4> frobenius_matrix_direct(const CurveModel& M, const TorsionBasis& B) {
  Jacobian J(M, B.field);
  std::array<std::uint64_t, 4> m{};
  const MumfordDivisor* Ps[2] = {&B.P1, &B.P2};
  for (int j = 0; j < 2; ++j) {
    auto c = B.coordinates(J.frobenius(*Ps[j], 1));
    if (!c) throw Error("model-bug", "Frobenius image is not in the span of the basis");
    m[0 * 2 + j] = c->first;
    m[1 * 2 + j] = c->second;
  }
  return m;
}

std::string serialize_basis(const CurveModel& M, const TorsionBasis& B) {
  Jacobian J(M, B.field);
  std::ostringstream out;
  out << "p: " << B.p << "\n";
  out << "degree: " << B.field->degree() << "\n";
  out << "modulus:";
  for (auto c : B.field->modulus()) out << " " << c;
  out << "\n";
  out << "P1: " << J.to_string(B.P1) << "\n";
  out << "P2: " << J.to_string(B.P2) << "\n";
  for (const auto& [k, m] : B.action) out << "T" << k << ": " << m[0] << " " << m[1] << " " << m[2] << " " << m[3] << "\n";
  return out.str();
}

TorsionBasis parse_basis(const CurveModel& M, const HeckeEigenSystem& sys, const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    kv[line.substr(0, colon)] = line.substr(colon + 2);
  }
  for (const char* k : {"p", "degree", "modulus", "P1", "P2"})
    if (!kv.count(k)) throw Error("parse", std::string("basis record lacks ") + k);
  TorsionBasis B;
  B.sys = &sys;
  B.p = std::stoull(kv["p"]);
  std::vector<std::uint64_t> mod;
  std::stringstream ms(kv["modulus"]);
  std::uint64_t c;
  while (ms >> c) mod.push_back(c);
  B.field = GaloisField::with_modulus(B.p, mod);
  if (B.field->degree() != std::stoul(kv["degree"])) throw Error("parse", "degree does not match the modulus");
  Jacobian J(M, B.field);
  B.P1 = J.parse(kv["P1"]);
  B.P2 = J.parse(kv["P2"]);
  B.span = build_span(J, B.P1, B.P2, sys.ell);
  for (const auto& [key, val] : kv) {
    if (key.size() < 2 || key[0] != 'T') continue;
    std::array<std::uint64_t, 4> m{};
    std::stringstream ss(val);
    for (auto& x : m) ss >> x;
    B.action[static_cast<unsigned>(std::stoul(key.substr(1)))] = m;
  }
  return B;
}

}  // namespace x1

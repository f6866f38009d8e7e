#include "x1/curve_model.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "x1/factor.hpp"

namespace x1 {

BiPoly::BiPoly(Terms t) : t_(std::move(t)) {
  for (auto it = t_.begin(); it != t_.end();) it = it->second == 0 ? t_.erase(it) : std::next(it);
}

namespace {

std::string strip(std::string_view s) {
  std::string out;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
  return out;
}

Gf to_gf(const Rational& a, const GaloisField* F) {
  Gf den = F->from_integer(a.get_den());
  if (den.is_zero()) throw Error("domain", "denominator vanishes in characteristic " + std::to_string(F->characteristic()));
  return F->from_integer(a.get_num()) / den;
}

}  // namespace

BiPoly BiPoly::parse(std::string_view text, char v0, char v1) {
  std::string s = strip(text);
  if (s.empty()) throw Error("parse", "empty polynomial");
  Terms t;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    if (term.empty()) throw Error("parse", "empty term in '" + s + "'");
    Rational coef = sign;
    int e[2] = {0, 0};
    std::stringstream ss(term);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
      if (factor.empty()) throw Error("parse", "bad factor in '" + term + "'");
      if (factor[0] == v0 || factor[0] == v1) {
        int var = factor[0] == v0 ? 0 : 1;
        int pw = 1;
        if (factor.size() > 1) {
          if (factor[1] != '^') throw Error("parse", "bad factor '" + factor + "'");
          pw = std::stoi(factor.substr(2));
        }
        e[var] += pw;
      } else {
        Rational q;
        if (q.set_str(factor, 10) != 0) throw Error("parse", "bad coefficient '" + factor + "'");
        q.canonicalize();
        coef *= q;
      }
    }
    t[{e[0], e[1]}] += coef;
    i = j;
  }
  return BiPoly(std::move(t));
}

std::string BiPoly::to_string(char v0, char v1) const {
  if (t_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    auto [i, j] = it->first;
    Rational a = abs(it->second);
    bool neg = it->second < 0;
    std::string mono;
    auto add = [&](char v, int e) {
      if (e == 0) return;
      if (!mono.empty()) mono += '*';
      mono += v;
      if (e > 1) mono += '^' + std::to_string(e);
    };
    add(v0, i);
    add(v1, j);
    std::string body;
    if (a != 1 || mono.empty()) body = a.get_str();
    if (!mono.empty()) body += (body.empty() ? "" : "*") + mono;
    if (first)
      out += (neg ? "-" : "") + body;
    else
      out += (neg ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

int BiPoly::degree_in(int var) const {
  int d = -1;
  for (const auto& [e, a] : t_) d = std::max(d, var == 0 ? e.first : e.second);
  return d;
}

Gf BiPoly::eval(const Gf& a, const Gf& b) const {
  const GaloisField* F = a.field();
  Gf r = F->zero();
  for (const auto& [e, coef] : t_) r += to_gf(coef, F) * a.pow(static_cast<std::uint64_t>(e.first)) * b.pow(static_cast<std::uint64_t>(e.second));
  return r;
}

GfPoly BiPoly::in_second(const Gf& a) const {
  const GaloisField* F = a.field();
  std::vector<Gf> c(std::max(0, degree_in(1)) + 1, F->zero());
  for (const auto& [e, coef] : t_) c[e.second] += to_gf(coef, F) * a.pow(static_cast<std::uint64_t>(e.first));
  return GfPoly(std::move(c));
}

Gf RationalMap::eval(const Gf& a, const Gf& b) const {
  Gf d = den.eval(a, b);
  if (d.is_zero()) throw Error("pole", "rational map has a pole here");
  return num.eval(a, b) / d;
}

// ---------------------------------------------------------------------------
// records

namespace {

ZPoly parse_zpoly(const std::string& s) {
  std::stringstream ss(s);
  std::vector<Integer> c;
  std::string tok;
  while (ss >> tok) c.push_back(parse_integer(tok));
  return ZPoly(std::move(c));
}

std::string zpoly_string(const ZPoly& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? " " : "") + p[i].get_str();
  return out;
}

const char* const kKeys[] = {"level",  "genus", "kind",  "h",     "f",     "equation", "b_num",          "b_den",
                             "c_num",  "c_den", "x_num", "x_den", "y_num", "y_den",    "origin",         "psi",
                             "rational_cusps", "cusp_orbit", "bad_primes", "rational_cusp_points", "rational_torsion"};

}  // namespace

CurveModel CurveModel::load(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::stringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw Error("parse", "model line without ':': " + line);
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    if (!value.empty() && value[0] == ' ') value.erase(0, 1);
    if (kv.count(key)) throw Error("parse", "duplicate key " + key);
    kv[key] = value;
  }
  auto need = [&](const std::string& k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw Error("parse", "model record lacks '" + k + "'");
    return it->second;
  };
  CurveModel M;
  M.level = static_cast<unsigned>(std::stoul(need("level")));
  M.genus = static_cast<unsigned>(std::stoul(need("genus")));
  const std::string& kind = need("kind");
  if (kind == "hyperelliptic") {
    M.kind = ModelKind::hyperelliptic;
    M.h = parse_zpoly(need("h"));
    M.f = parse_zpoly(need("f"));
  } else if (kind == "plane") {
    M.kind = ModelKind::plane;
    M.equation = BiPoly::parse(need("equation"), 'x', 'y');
  } else {
    throw Error("parse", "unknown model kind " + kind);
  }
  M.b = {BiPoly::parse(need("b_num"), 'x', 'y'), BiPoly::parse(need("b_den"), 'x', 'y')};
  M.c = {BiPoly::parse(need("c_num"), 'x', 'y'), BiPoly::parse(need("c_den"), 'x', 'y')};
  M.x_of = {BiPoly::parse(need("x_num"), 'b', 'c'), BiPoly::parse(need("x_den"), 'b', 'c')};
  M.y_of = {BiPoly::parse(need("y_num"), 'b', 'c'), BiPoly::parse(need("y_den"), 'b', 'c')};
  M.origin = need("origin");
  M.psi = need("psi");
  M.rational_cusps = static_cast<unsigned>(std::stoul(need("rational_cusps")));
  M.cusp_orbit = parse_zpoly(need("cusp_orbit"));
  std::stringstream bp(need("bad_primes"));
  std::uint64_t q;
  while (bp >> q) M.bad_primes.push_back(q);
  std::stringstream cp(need("rational_cusp_points"));
  std::string pt;
  while (cp >> pt) {
    auto comma = pt.find(',');
    if (comma == std::string::npos) throw Error("parse", "cusp point must be x,y");
    M.rational_cusp_points.push_back({parse_integer(pt.substr(0, comma)), parse_integer(pt.substr(comma + 1))});
  }
  M.rational_torsion = parse_integer(need("rational_torsion"));
  for (const auto& [k, v] : kv) {
    bool known = false;
    for (const char* key : kKeys) known = known || k == key;
    if (!known) throw Error("parse", "unknown model key " + k);
  }
  M.validate();
  return M;
}

CurveModel CurveModel::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot read model " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load(ss.str());
}

CurveModel CurveModel::bundled(unsigned n) {
  return load_file(std::string(X1_DATA_DIR) + "/x1_" + std::to_string(n) + ".model");
}

std::string CurveModel::save() const {
  std::ostringstream out;
  out << "level: " << level << "\n";
  out << "genus: " << genus << "\n";
  if (kind == ModelKind::hyperelliptic) {
    out << "kind: hyperelliptic\n";
    out << "h: " << zpoly_string(h) << "\n";
    out << "f: " << zpoly_string(f) << "\n";
  } else {
    out << "kind: plane\n";
    out << "equation: " << equation.to_string('x', 'y') << "\n";
  }
  out << "b_num: " << b.num.to_string('x', 'y') << "\n";
  out << "b_den: " << b.den.to_string('x', 'y') << "\n";
  out << "c_num: " << c.num.to_string('x', 'y') << "\n";
  out << "c_den: " << c.den.to_string('x', 'y') << "\n";
  out << "x_num: " << x_of.num.to_string('b', 'c') << "\n";
  out << "x_den: " << x_of.den.to_string('b', 'c') << "\n";
  out << "y_num: " << y_of.num.to_string('b', 'c') << "\n";
  out << "y_den: " << y_of.den.to_string('b', 'c') << "\n";
  out << "origin: " << origin << "\n";
  out << "psi: " << psi << "\n";
  out << "rational_cusps: " << rational_cusps << "\n";
  out << "cusp_orbit: " << zpoly_string(cusp_orbit) << "\n";
  out << "bad_primes:";
  for (auto p : bad_primes) out << " " << p;
  out << "\n";
  out << "rational_cusp_points:";
  for (const auto& [x, y] : rational_cusp_points) out << " " << x.get_str() << "," << y.get_str();
  out << "\n";
  out << "rational_torsion: " << rational_torsion.get_str() << "\n";
  return out.str();
}

bool CurveModel::is_good(std::uint64_t p) const {
  if (p == level || p < 3) return false;
  for (auto q : bad_primes)
    if (q == p) return false;
  return true;
}

bool CurveModel::on_curve(const CurvePoint& P) const {
  const GaloisField* F = P.x.field();
  if (kind == ModelKind::plane) return equation.eval(P.x, P.y).is_zero();
  return (P.y * P.y + h_over(F).eval(P.x) * P.y - f_over(F).eval(P.x)).is_zero();
}

bool CurveModel::is_rational_cusp(const CurvePoint& P) const {
  const GaloisField* F = P.x.field();
  for (const auto& [x, y] : rational_cusp_points)
    if (P.x == F->from_integer(x) && P.y == F->from_integer(y)) return true;
  return false;
}

namespace {

// Affine points over F_p found by scanning x, at most `limit` of them.
std::vector<CurvePoint> some_points(const CurveModel& M, const GaloisField* F, std::size_t limit) {
  std::vector<CurvePoint> out;
  GfPoly hF, fF;
  if (M.kind == ModelKind::hyperelliptic) {
    hF = M.h_over(F);
    fF = M.f_over(F);
  }
  const std::uint64_t q = to_u64(F->order());
  for (std::uint64_t i = 0; i < q && out.size() < limit; ++i) {
    Gf x = F->element_at(i);
    GfPoly fiber;
    if (M.kind == ModelKind::hyperelliptic)
      fiber = GfPoly(std::vector<Gf>{-fF.eval(x), hF.eval(x), F->one()});
    else
      fiber = M.equation.in_second(x);
    if (fiber.is_zero()) continue;
    for (const auto& y : roots(fiber)) out.push_back({x, y});
  }
  return out;
}

}  // namespace

void CurveModel::validate() const {
  if (level < 5 || !is_prime(static_cast<std::uint64_t>(level))) throw Error("parse", "level must be a prime >= 5");
  const unsigned expected = (level - 5) * (level - 7) / 24;
  if (genus != expected) throw Error("wrong-genus", "genus " + std::to_string(genus) + " != " + std::to_string(expected));
  if (kind == ModelKind::hyperelliptic) {
    ZPoly D = h * h + f * Integer(4);
    const int d = D.degree();
    if (d != static_cast<int>(2 * genus + 1) && d != static_cast<int>(2 * genus + 2))
      throw Error("wrong-genus", "degree of h^2 + 4f does not match the genus");
    if (h.degree() > static_cast<int>(genus + 1) || f.degree() > static_cast<int>(2 * genus + 2))
      throw Error("parse", "h or f has too large a degree");
    unsigned tested = 0;
    for (std::uint64_t p = 5; tested < 4; p += 2) {
      if (!is_prime(p) || !is_good(p)) continue;
      const GaloisField* F = GaloisField::get(p, 1);
      GfPoly Dp = reduce_poly(D, F);
      if (Dp.degree() != d || !is_squarefree(Dp))
        throw Error("singular-model", "model is singular at the good prime " + std::to_string(p));
      ++tested;
    }
  }
  if (origin == "none" || psi == "none") {
    if (origin != psi) throw Error("parse", "origin and psi must both be given or both be none");
  } else {
    // y ~ -h at inf+ and y ~ f/h at inf-: y has poles only at inf+ iff deg f <= deg h.
    if (kind != ModelKind::hyperelliptic || origin != "inf+" || psi != "y" || f.degree() > h.degree() ||
        h.degree() != static_cast<int>(genus + 1))
      throw Error("psi-pole", "psi must be y with its only pole at inf+ on a split hyperelliptic model");
  }
  // moduli round trip
  std::uint64_t p = 29;
  while (!is_prime(p) || !is_good(p)) ++p;
  const GaloisField* F = GaloisField::get(p, 1);
  unsigned checked = 0;
  for (const auto& P : some_points(*this, F, 64)) {
    std::pair<Gf, Gf> bc;
    try {
      bc = point_to_moduli(*this, P);
    } catch (const Error& e) {
      if (e.code() == "cusp") continue;
      throw Error("moduli-round-trip", std::string("moduli map failed: ") + e.what());
    }
    CurvePoint Q;
    try {
      Q = moduli_to_point(*this, bc.first, bc.second);
    } catch (const Error& e) {
      throw Error("moduli-round-trip", std::string("inverse map failed: ") + e.what());
    }
    if (!(Q == P)) throw Error("moduli-round-trip", "point -> (b, c) -> point is not the identity");
    ++checked;
  }
  if (checked < 5) throw Error("moduli-round-trip", "too few non-cuspidal points to validate the moduli maps");
}

// ---------------------------------------------------------------------------
// moduli

std::pair<Gf, Gf> point_to_moduli(const CurveModel& M, const CurvePoint& P) {
  Gf b, c;
  try {
    b = M.b.eval(P.x, P.y);
    c = M.c.eval(P.x, P.y);
  } catch (const Error& e) {
    if (e.code() == "pole") throw Error("cusp", "point is a cusp (pole of the moduli map)");
    throw;
  }
  Weierstrass E = tate_normal_form(b, c);
  if (!E.nonsingular()) throw Error("cusp", "point is a cusp (singular Tate curve)");
  EPoint O = EPoint::affine(b.field()->zero(), b.field()->zero());
  if (ec_order_up_to(E, O, M.level) != M.level) throw Error("model-bug", "(0, 0) does not have order n on E_{b,c}");
  return {b, c};
}

CurvePoint moduli_to_point(const CurveModel& M, const Gf& b, const Gf& c) {
  CurvePoint P;
  try {
    P = {M.x_of.eval(b, c), M.y_of.eval(b, c)};
  } catch (const Error& e) {
    if (e.code() == "pole") throw Error("model-bug", "inverse moduli map has a pole at a non-cuspidal pair");
    throw;
  }
  if (!M.on_curve(P)) throw Error("model-bug", "inverse moduli map leaves the curve");
  return P;
}

HeckeImage hecke_image_point(const CurveModel& M, const CurvePoint& P, unsigned m) {
  if (m != 2 && m != 3) throw Error("unsupported", "Hecke correspondences only for m = 2, 3");
  const GaloisField* F = P.x.field();
  if (m == F->characteristic()) throw Error("inseparable", "m equals the characteristic");
  if (m == M.level) throw Error("domain", "m divides the level");
  auto [b, c] = point_to_moduli(M, P);
  Weierstrass E = tate_normal_form(b, c);
  HeckeImage out;
  auto groups = cyclic_subgroups(E, m, &out.field);
  out.embedding = Embedding::find(F, out.field);
  Weierstrass EL = E.map(out.embedding);
  EPoint O = EPoint::affine(out.field->zero(), out.field->zero());
  for (const auto& K : groups) {
    VeluIsogeny phi(EL, K);
    auto [b2, c2] = tate_parameters(phi.codomain(), phi(O));
    out.points.push_back(moduli_to_point(M, b2, c2));
  }
  return out;
}

CurvePoint diamond_operator(const CurveModel& M, const CurvePoint& P, long d) {
  const long n = M.level;
  d %= n;
  if (d < 0) d += n;
  if (d == 0) throw Error("domain", "d must be a unit mod n");
  if (d == 1) return P;
  auto [b, c] = point_to_moduli(M, P);
  Weierstrass E = tate_normal_form(b, c);
  EPoint Q = ec_mul(E, EPoint::affine(b.field()->zero(), b.field()->zero()), Integer(d));
  auto [b2, c2] = tate_parameters(E, Q);
  return moduli_to_point(M, b2, c2);
}

// ---------------------------------------------------------------------------
// counting

Integer count_points_naive(const CurveModel& M, std::uint64_t p, unsigned i, const Integer& work_bound) {
  if (!is_prime(p) || !M.is_good(p)) throw Error("bad-prime", std::to_string(p) + " is not a good prime for the model");
  if (i == 0) throw Error("domain", "extension degree must be positive");
  if (pow(Integer(p), i) > work_bound) throw Error("work-bound", "p^i exceeds the work bound");
  const GaloisField* F = GaloisField::get(p, i);
  const std::uint64_t q = to_u64(F->order());
  Integer n = 0;
  if (M.kind == ModelKind::hyperelliptic) {
    ZPoly D = M.h * M.h + M.f * Integer(4);
    GfPoly Dq = reduce_poly(D, F);
    for (std::uint64_t k = 0; k < q; ++k) {
      Gf v = Dq.eval(F->element_at(k));
      n += v.is_zero() ? 1 : (v.is_square() ? 2 : 0);
    }
    if (Dq.degree() % 2 == 1)
      n += 1;
    else
      n += Dq.lead().is_square() ? 2 : 0;
    return n;
  }
  const Gf one = F->one();
  EPoint O = EPoint::affine(F->zero(), F->zero());
  for (std::uint64_t k = 0; k < q; ++k) {
    Gf x = F->element_at(k);
    GfPoly fiber = M.equation.in_second(x);
    if (fiber.is_zero()) throw Error("model-bug", "plane model contains a vertical line");
    for (const auto& y : roots(fiber)) {
      Gf b, c;
      try {
        b = M.b.eval(x, y);
        c = M.c.eval(x, y);
      } catch (const Error& e) {
        if (e.code() == "pole") continue;
        throw;
      }
      Weierstrass E = tate_normal_form(b, c);
      if (!E.nonsingular()) continue;
      if (ec_order_up_to(E, O, M.level) != M.level) continue;
      n += 1;
    }
  }
  n += M.rational_cusps;
  n += static_cast<unsigned long>(roots(reduce_poly(M.cusp_orbit, F)).size());
  return n;
}

namespace {

// Elementary symmetric functions from power sums s_1..s_K (exact over Z).
std::vector<Integer> newton_e(const std::vector<Integer>& s, std::size_t K) {
  std::vector<Integer> e(K + 1, 0);
  e[0] = 1;
  for (std::size_t k = 1; k <= K; ++k) {
    Integer t = 0;
    for (std::size_t i = 1; i <= k; ++i) t += ((i % 2) ? 1 : -1) * e[k - i] * s[i];
    if (t % Integer(static_cast<unsigned long>(k)) != 0) throw Error("inconsistent-counts", "counts do not come from a curve");
    e[k] = t / Integer(static_cast<unsigned long>(k));
  }
  return e;
}

ZPoly poly_from_e(const std::vector<Integer>& e) {
  const std::size_t n = e.size() - 1;
  std::vector<Integer> c(n + 1);
  for (std::size_t k = 0; k <= n; ++k) c[n - k] = (k % 2 ? -1 : 1) * e[k];
  return ZPoly(std::move(c));
}

// Power sums s_1..s_K of the roots of a monic polynomial.
std::vector<Integer> power_sums(const ZPoly& P, std::size_t K) {
  const std::size_t n = P.degree();
  std::vector<Integer> e(n + 1);
  for (std::size_t k = 0; k <= n; ++k) e[k] = (k % 2 ? -1 : 1) * P[n - k];
  std::vector<Integer> s(K + 1, 0);
  for (std::size_t k = 1; k <= K; ++k) {
    Integer t = k <= n ? Integer((k % 2 ? 1 : -1) * static_cast<long>(k)) * e[k] : Integer(0);
    for (std::size_t i = 1; i < k && i <= n; ++i) t += (i % 2 ? 1 : -1) * e[i] * s[k - i];
    s[k] = t;
  }
  return s;
}

}  // namespace

ZetaData zeta_from_counts(const std::vector<Integer>& counts, const Integer& p) {
  const std::size_t g = counts.size();
  if (g == 0) throw Error("domain", "no counts given");
  std::vector<Integer> s(g + 1, 0);
  for (std::size_t k = 1; k <= g; ++k) {
    Integer qk = pow(p, static_cast<unsigned long>(k));
    Integer dev = counts[k - 1] - qk - 1;
    if (dev * dev > Integer(4 * g * g) * qk) throw Error("weil-bound", "count " + std::to_string(k) + " violates the Weil bound");
    s[k] = -dev;
  }
  std::vector<Integer> e = newton_e(s, g);
  e.resize(2 * g + 1);
  for (std::size_t k = 0; k < g; ++k) e[2 * g - k] = pow(p, static_cast<unsigned long>(g - k)) * e[k];
  ZetaData z;
  z.p = p;
  z.genus = static_cast<unsigned>(g);
  z.counts = counts;
  z.numerator = poly_from_e(e);
  return z;
}

ZPoly ZetaData::numerator_power(unsigned d) const {
  const std::size_t n = numerator.degree();
  std::vector<Integer> s = power_sums(numerator, n * d);
  std::vector<Integer> sd(n + 1, 0);
  for (std::size_t j = 1; j <= n; ++j) sd[j] = s[j * d];
  return poly_from_e(newton_e(sd, n));
}

Integer ZetaData::curve_count(unsigned d) const {
  std::vector<Integer> s = power_sums(numerator, d);
  return pow(p, d) + 1 - s[d];
}

Integer ZetaData::jacobian_order(unsigned d) const { return numerator_power(d).eval(Integer(1)); }

ZetaData zeta_naive(const CurveModel& M, std::uint64_t p) {
  std::vector<Integer> counts;
  for (unsigned i = 1; i <= M.genus; ++i) counts.push_back(count_points_naive(M, p, i));
  return zeta_from_counts(counts, Integer(p));
}

}  // namespace x1

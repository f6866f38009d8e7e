#include "x1/pipeline.hpp"

#include <map>
#include <sstream>

namespace x1 {

namespace {

void say(const PipelineConfig& cfg, const std::string& s) {
  if (cfg.log) cfg.log(s);
}

std::string system_key(const std::string& kind, const HeckeEigenSystem& sys) {
  return kind + "-n" + std::to_string(sys.level) + "-l" + std::to_string(sys.ell) + "-" + cache_id(sys.describe());
}

GfPoly quadratic(const Gf& trace, const Gf& det) {
  const GaloisField* F = trace.field();
  return GfPoly(std::vector<Gf>{det, -trace, F->one()});
}

std::string mat_text(const Mat2& m) {
  return std::to_string(m[0]) + " " + std::to_string(m[1]) + " " + std::to_string(m[2]) + " " + std::to_string(m[3]);
}

bool fits_u64(const Integer& p) { return p > 0 && mpz_sizeinbase(p.get_mpz_t(), 2) <= 62; }

FactorRecord finish(const HeckeEigenSystem& sys, std::string route, const Gf& trace, const Gf& det, Mat2 m = {}) {
  FactorRecord r;
  r.system = sys.describe();
  r.ell = sys.ell;
  r.route = std::move(route);
  r.frobenius = m;
  r.R = quadratic(trace, det);
  r.A = conjugate_product(r.R, sys.ell);
  return r;
}

FactorRecord hecke_factor(const HeckeEigenSystem& sys, const Integer& p) {
  if (!fits_u64(p)) throw Error("unsupported", "the Hecke route needs p below 2^62");
  const std::uint64_t q = to_u64(p);
  const Gf det = sys.character(static_cast<std::int64_t>(q % sys.level)) * sys.field->from_int(static_cast<std::int64_t>(q % sys.ell));
  return finish(sys, "hecke", sys.eigenvalue(q), det);
}

FactorRecord direct_factor(const CurveModel& M, const HeckeEigenSystem& sys, const Integer& p, const PipelineConfig& cfg) {
  if (!fits_u64(p)) throw Error("unsupported", "the direct route needs p below 2^62");
  TorsionBasis B = jm_basis(M, sys, to_u64(p), cfg.seed);
  const Mat2 m = frobenius_matrix_direct(M, B);
  const GaloisField* F = sys.field;
  const std::int64_t ell = static_cast<std::int64_t>(sys.ell);
  const Gf tr = F->from_int(static_cast<std::int64_t>((m[0] + m[3]) % sys.ell));
  const Gf det = F->from_int(static_cast<std::int64_t>((m[0] * m[3] + sys.ell * sys.ell - m[1] * m[2] % sys.ell) % ell));
  return finish(sys, "direct", tr, det, m);
}

FactorRecord large_p_factor(const CurveModel& M, const HeckeEigenSystem& sys, const Integer& p, const PipelineConfig& cfg) {
  const std::string key = system_key("frob", sys) + "-" + cache_id(p.get_str());
  Mat2 rep{};
  if (auto text = cfg.cache.get(key)) {
    std::stringstream in(*text);
    std::string pstr;
    in >> pstr >> rep[0] >> rep[1] >> rep[2] >> rep[3];
    if (pstr != p.get_str()) rep = {};
  }
  if (rep == Mat2{}) {
    IotaPolynomial I = cached_piota(M, sys, cfg);
    FrobeniusClassData D = cached_gamma(I, cfg);
    FrobeniusClass c = frobenius_class_large_p(D, I, p);
    rep = c.rep;
    cfg.cache.put(key, p.get_str() + " " + mat_text(rep) + "\n");
  }
  const GaloisField* F = sys.field;
  const std::uint64_t ell = sys.ell;
  const Gf tr = F->from_int(static_cast<std::int64_t>((rep[0] + rep[3]) % ell));
  const Gf det = F->from_int(static_cast<std::int64_t>((rep[0] * rep[3] + ell * ell - rep[1] * rep[2] % ell) % ell));
  return finish(sys, "large-p", tr, det, rep);
}

}  // namespace

IotaPolynomial cached_piota(const CurveModel& M, const HeckeEigenSystem& sys, const PipelineConfig& cfg) {
  const std::string key = system_key("iota", sys);
  if (auto text = cfg.cache.get(key)) return parse_iota(sys, *text);
  PiotaOptions opt = cfg.piota;
  opt.seed = cfg.seed;
  if (!opt.log) opt.log = cfg.log;
  IotaPolynomial I = piota_global(M, sys, opt);
  cfg.cache.put(key, serialize_iota(I));
  return I;
}

FrobeniusClassData cached_gamma(const IotaPolynomial& iota, const PipelineConfig& cfg) {
  const std::string key = system_key("gamma", *iota.sys) + "-" + cache_id(serialize_iota(iota));
  if (auto text = cfg.cache.get(key)) return parse_gamma(*iota.sys, *text);
  GammaOptions opt = cfg.gamma;
  if (!opt.log) opt.log = cfg.log;
  FrobeniusClassData D = gamma_polys(iota, opt);
  cfg.cache.put(key, serialize_gamma(D));
  return D;
}

Integer weil_height(int d, const Integer& p) {
  Integer s;
  mpz_sqrt(s.get_mpz_t(), p.get_mpz_t());
  if (s * s != p) s += 1;
  Integer best = 1, binom = 1;
  for (int k = 0; k <= d; ++k) {
    if (k) binom = binom * (d - k + 1) / k;
    const Integer root = k % 2 ? pow(p, static_cast<unsigned>(k / 2)) * s : pow(p, static_cast<unsigned>(k / 2));
    best = std::max(best, Integer(binom * root));
  }
  return best;
}

GfPoly conjugate_product(const GfPoly& R, std::uint64_t ell) {
  const GaloisField* F = R.lead().field();
  if (F->characteristic() != ell) throw Error("domain", "R is not over an extension of F_ell");
  GfPoly A = R;
  for (unsigned i = 1; i < F->degree(); ++i) A = A * frobenius_poly(R, i);
  std::vector<std::int64_t> c;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (!A[i].in_prime_field()) throw Error("model-bug", "conjugate product does not descend to F_ell");
    c.push_back(static_cast<std::int64_t>(A[i].to_u64()));
  }
  return gfpoly(GaloisField::get(ell, 1), c);
}

FactorRecord frobenius_factor(const CurveModel& M, const HeckeEigenSystem& sys, const Integer& p,
                              const PipelineConfig& cfg) {
  if (!is_prime(p)) throw Error("domain", "p must be prime");
  if (mod(p, Integer(sys.level * sys.ell)) % sys.level == 0 || mod(p, Integer(sys.ell)) == 0)
    throw Error("domain", "p divides n ell");
  if (cfg.route == "hecke") return hecke_factor(sys, p);
  if (cfg.route == "direct") return direct_factor(M, sys, p, cfg);
  if (cfg.route == "large-p") return large_p_factor(M, sys, p, cfg);
  if (cfg.route != "auto") throw Error("usage", "unknown route " + cfg.route);
  // auto: direct at good small p, else the global route, else Hecke eigenvalues
  if (fits_u64(p) && p < Integer(1) << 20 && M.is_good(to_u64(p)) && definition_field(sys, to_u64(p)).order_ok) {
    try {
      return direct_factor(M, sys, p, cfg);
    } catch (const Error& e) {
      if (e.code() == "model-bug") throw;
      say(cfg, "direct route failed at p=" + p.get_str() + ": " + e.code());
    }
  }
  try {
    return large_p_factor(M, sys, p, cfg);
  } catch (const Error& e) {
    if (e.code() != "ambiguous-class" || !fits_u64(p) || p >= Integer(1) << 20) throw;
    say(cfg, "ambiguous class at p=" + p.get_str() + ", using Hecke eigenvalues");
  }
  return hecke_factor(sys, p);
}

std::vector<ModularFactor> ModularFactorSet::by_ell() const {
  std::map<std::uint64_t, GfPoly> prod;
  for (const auto& r : records) {
    auto it = prod.find(r.ell);
    if (it == prod.end())
      prod.emplace(r.ell, r.A);
    else
      it->second = it->second * r.A;
  }
  std::vector<ModularFactor> out;
  for (const auto& [ell, A] : prod) {
    std::vector<Integer> c;
    for (std::size_t i = 0; i < A.size(); ++i) c.push_back(Integer(A[i].to_u64()));
    out.push_back({Integer(ell), ZPoly(std::move(c))});
  }
  return out;
}

ZPoly charpoly_f(const ModularFactorSet& factors, int degree, const Integer& height, const Integer& p) {
  ReconstructionInstance inst;
  inst.degree = degree;
  inst.height = height;
  inst.factors = factors.by_ell();
  ZPoly P = reconstruct_charpoly(inst);
  // functional equation of a Frobenius characteristic polynomial: c_k p^k = p^(d/2) c_(d-k)
  if (degree % 2) throw Error("domain", "P_f must have even degree");
  const Integer half = pow(p, static_cast<unsigned>(degree / 2));
  Integer pk = 1;
  for (int k = 0; k <= degree; ++k, pk *= p)
    if (P[k] * pk != half * P[degree - k])
      throw Error("inconsistent", "reconstructed P_f fails the functional equation");
  return P;
}

CountResult count_points(const CurveModel& M, const Integer& p, const std::string& mode, std::uint64_t ell,
                         const PipelineConfig& cfg) {
  if (!M.has_jacobian())
    throw Error("unsupported", "counting on X_1(" + std::to_string(M.level) + ") needs Jacobian arithmetic for genus " +
                                   std::to_string(M.genus) + ", which this model does not provide (use schoof for elliptic factors)");
  if (!is_prime(p)) throw Error("domain", "p must be prime");
  if (fits_u64(p) && !M.is_good(to_u64(p))) throw Error("bad-prime", "X_1(n) has bad reduction at p");
  const int d = static_cast<int>(2 * M.genus);
  auto S = ModularSymbolSpace::build(M.level);
  CountResult out;
  out.n = M.level;
  out.p = p;
  out.mode = mode;

  // every system mod ell, with the degree check that they cover all of H^1
  auto collect = [&](std::uint64_t l, const PipelineConfig& c) {
    std::vector<FactorRecord> recs;
    int covered = 0;
    for (const auto& sys : eigen_systems_mod_ell(S, l)) {
      recs.push_back(frobenius_factor(M, sys, p, c));
      covered += recs.back().A.degree();
    }
    if (covered != d) return std::optional<std::vector<FactorRecord>>{};
    return std::optional{std::move(recs)};
  };

  if (mode == "mod-ell") {
    if (!ell || !is_prime(Integer(ell)) || M.level % ell == 0 || mod(p, Integer(ell)) == 0)
      throw Error("usage", "mod-ell mode needs a prime ell not dividing n p");
    auto recs = collect(ell, cfg);
    if (!recs) throw Error("unsupported", "eigen-systems mod " + std::to_string(ell) + " are congruent; P_n mod ell is not their product");
    out.ell = ell;
    const GaloisField* F = GaloisField::get(ell, 1);
    out.P_mod = GfPoly::constant(F->one());
    for (auto& r : *recs) {
      out.P_mod = out.P_mod * r.A;
      out.factors.records.push_back(std::move(r));
    }
    const Gf pm = F->from_integer(p);
    out.points = Integer((F->one() + pm + out.P_mod.coeff(d - 1, F->zero())).to_u64());
    out.jacobian = Integer(out.P_mod.eval(F->one()).to_u64());
    return out;
  }
  if (mode != "exact") throw Error("usage", "mode is exact or mod-ell");
  if (!fits_u64(p)) throw Error("unsupported", "exact mode needs p below 2^62");

  // X_1(13) has one newform class, so P_n = P_f with n_f = g.
  PipelineConfig c = cfg;
  if (c.route == "auto") c.route = "hecke";
  const Integer H = cfg.height ? *cfg.height : weil_height(d, p);
  for (std::uint64_t l = 3;; l = next_prime(l)) {
    if (l > 2000) throw Error("prime-budget", "no sufficient set of primes ell below 2000");
    if (M.level % l == 0 || mod(p, Integer(l)) == 0) continue;
    auto recs = collect(l, c);
    if (!recs) {
      say(cfg, "skip ell=" + std::to_string(l) + ": congruent systems");
      continue;
    }
    for (auto& r : *recs) out.factors.records.push_back(std::move(r));
    ReconstructionInstance inst{d, out.factors.by_ell(), H};
    if (check_sufficiency(inst).ok()) break;
  }
  out.P = charpoly_f(out.factors, d, H, p);
  out.points = 1 + p + out.P[d - 1];
  out.jacobian = out.P.eval(Integer(1));
  return out;
}

std::string CountResult::to_text() const {
  std::ostringstream os;
  os << "n: " << n << "\n";
  os << "p: " << p.get_str() << "\n";
  os << "mode: " << mode << "\n";
  if (mode == "mod-ell") os << "ell: " << ell << "\n";
  for (const auto& r : factors.records) {
    os << "factor: ell=" << r.ell << " route=" << r.route << " R=" << to_string(r.R, "t") << " A=" << to_string(r.A, "t");
    if (r.route != "hecke") os << " frob=" << mat_text(r.frobenius);
    os << " system=" << r.system << "\n";
  }
  if (mode == "mod-ell") {
    os << "P: " << to_string(P_mod, "t") << " mod " << ell << "\n";
    os << "points: " << points << " mod " << ell << "\n";
    os << "jacobian: " << jacobian << " mod " << ell << "\n";
  } else {
    os << "P: " << to_string(P, "t") << "\n";
    os << "points: " << points << "\n";
    os << "jacobian: " << jacobian << "\n";
  }
  return os.str();
}

}  // namespace x1

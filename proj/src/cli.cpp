#include "x1/cli.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "x1/pipeline.hpp"

namespace x1 {

namespace {

struct Options {
  unsigned n = 13;
  std::uint64_t ell = 7;
  std::string p;
  unsigned form = 0;  // 1-based; 0 = every system
  std::uint64_t seed = 1;
  std::string mode = "mod-ell";
  std::string route = "auto";
  unsigned budget = 4000;
  std::optional<double> height_delta;
  std::string height;
  std::string cache_dir;
  unsigned holdout = 2;
  std::uint64_t start = 1000;
  unsigned precision = 0;
  std::string ainvs = "1,-1,1,-1,-14";
  std::string action = "inspect";
  bool full = false;
  bool verbose = false;
};

PipelineConfig config(const Options& o, std::ostream& err) {
  PipelineConfig cfg;
  cfg.cache = o.cache_dir.empty() ? Cache::from_env("") : Cache(o.cache_dir);
  cfg.seed = o.seed;
  cfg.route = o.route;
  cfg.piota.holdout = o.holdout;
  cfg.piota.max_primes = o.budget;
  cfg.piota.start = o.start;
  cfg.gamma.precision = o.precision;
  if (o.height_delta) {
    // log H = n^delta |F|^2, natural log
    const double digits = std::pow(double(o.n), *o.height_delta) * double(o.ell * o.ell) / std::log(10.0);
    if (digits > 1e7) throw Error("usage", "height bound from --height-delta is too large");
    cfg.piota.height_bound = pow(Integer(10), static_cast<unsigned>(std::ceil(digits)));
  }
  if (!o.height.empty()) cfg.height = parse_integer(o.height);
  if (o.verbose) cfg.log = [&err](const std::string& s) { err << "log: " << s << "\n"; };
  return cfg;
}

CurveModel model(unsigned n) {
  if (n != 13 && n != 17) throw Error("unsupported", "no bundled model for X_1(" + std::to_string(n) + ")");
  return CurveModel::bundled(n);
}

std::vector<HeckeEigenSystem> systems(unsigned n, std::uint64_t ell) {
  if (!is_prime(Integer(ell))) throw Error("usage", "ell must be prime");
  return eigen_systems_mod_ell(ModularSymbolSpace::build(n), ell);
}

const HeckeEigenSystem& pick(const std::vector<HeckeEigenSystem>& sys, unsigned form) {
  if (form == 0) form = 1;
  if (form > sys.size()) throw Error("usage", "--form out of range: " + std::to_string(sys.size()) + " systems");
  return sys[form - 1];
}

Integer prime_arg(const Options& o) {
  if (o.p.empty()) throw Error("usage", "--p is required");
  Integer p = parse_integer(o.p);
  if (!is_prime(p)) throw Error("domain", "p = " + o.p + " is not prime");
  return p;
}

std::string mat_text(const Mat2& m) {
  std::ostringstream os;
  os << m[0] << " " << m[1] << " " << m[2] << " " << m[3];
  return os.str();
}

void run_eigen(const Options& o, std::ostream& out) {
  auto sys = systems(o.n, o.ell);
  out << "n: " << o.n << "\nell: " << o.ell << "\nsystems: " << sys.size() << "\n";
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& s = sys[i];
    out << "system: " << i + 1 << "\n";
    out << "field: " << s.field->describe() << "\n";
    out << "eigenvalues:";
    for (std::size_t k = 2; k <= s.bound(); ++k) out << " a" << k << "=" << s.a[k].to_string();
    out << "\nchi:";
    for (std::size_t m = 1; m < s.chi.size(); ++m) out << " " << s.chi[m].to_string();
    out << "\noptimal:";
    for (auto k : s.optimal) out << " " << k;
    out << "\n";
  }
}

void run_zeta(const Options& o, std::ostream& out) {
  CurveModel M = model(o.n);
  const Integer p = prime_arg(o);
  if (!M.has_jacobian()) throw Error("unsupported", "naive zeta needs the hyperelliptic model (n = 13)");
  ZetaData z = zeta_naive(M, to_u64(p));
  out << "n: " << o.n << "\np: " << p << "\n";
  for (std::size_t i = 0; i < z.counts.size(); ++i) out << "count_" << i + 1 << ": " << z.counts[i] << "\n";
  out << "P: " << to_string(z.numerator, "t") << "\n";
  out << "jacobian: " << z.jacobian_order(1) << "\n";
}

void run_torsion(const Options& o, std::ostream& out) {
  CurveModel M = model(o.n);
  auto sys = systems(o.n, o.ell);
  const auto& s = pick(sys, o.form);
  const Integer p = prime_arg(o);
  TorsionBasis B = jm_basis(M, s, to_u64(p), o.seed);
  out << serialize_basis(M, B);
  out << "frobenius: " << mat_text(frobenius_matrix_direct(M, B)) << "\n";
}

void run_piota(const Options& o, const PipelineConfig& cfg, std::ostream& out) {
  CurveModel M = model(o.n);
  auto sys = systems(o.n, o.ell);
  const auto& s = pick(sys, o.form);
  IotaPolynomial I = cached_piota(M, s, cfg);
  out << "system: " << s.describe() << "\n";
  out << "degree: " << I.Z.degree() << "\n";
  out << "primes: " << I.primes.size() << " (" << I.primes.front() << ".." << I.primes.back() << ")\n";
  out << "holdout:";
  for (auto q : I.holdout) out << " " << q;
  out << "\nheight_digits: " << mpz_sizeinbase(I.height().get_mpz_t(), 10) << "\n";
  out << "denominator: " << I.denominator() << "\n";
  out << "anchor: " << I.r << " degree " << I.anchor_field->degree() << "\n";
  if (o.full) out << serialize_iota(I);
}

void run_gamma(const Options& o, const PipelineConfig& cfg, std::ostream& out) {
  CurveModel M = model(o.n);
  auto sys = systems(o.n, o.ell);
  const auto& s = pick(sys, o.form);
  FrobeniusClassData D = cached_gamma(cached_piota(M, s, cfg), cfg);
  std::size_t digits = 0;
  for (const auto& g : D.gamma)
    for (std::size_t j = 0; j < g.size(); ++j) digits = std::max(digits, mpz_sizeinbase(g[j].get_mpz_t(), 10));
  out << "system: " << s.describe() << "\n";
  out << "h: " << to_string(D.h) << "\n";
  out << "classes: " << D.classes.size() << "\n";
  out << "precision: " << D.precision << "\n";
  out << "max_digits: " << digits << "\n";
  if (o.full) out << serialize_gamma(D);
}

void print_factor(std::ostream& out, unsigned form, const FactorRecord& r) {
  out << "class: form=" << form << " route=" << r.route << " R=" << to_string(r.R, "t") << " A=" << to_string(r.A, "t");
  if (r.route != "hecke") out << " rep=" << mat_text(r.frobenius);
  out << "\n";
}

void run_frob(const Options& o, const PipelineConfig& cfg, std::ostream& out) {
  CurveModel M = model(o.n);
  const Integer p = prime_arg(o);
  if (o.form) {
    auto sys = systems(o.n, o.ell);
    print_factor(out, o.form, frobenius_factor(M, pick(sys, o.form), p, cfg));
    return;
  }
  CountResult r = count_points(M, p, "mod-ell", o.ell, cfg);
  out << r.to_text();
}

void run_schoof(const Options& o, std::ostream& out) {
  const Integer p = prime_arg(o);
  std::array<Integer, 5> a;
  std::stringstream ss(o.ainvs);
  std::string tok;
  int i = 0;
  while (std::getline(ss, tok, ',')) {
    if (i == 5) throw Error("usage", "--ainvs takes five integers");
    a[i++] = parse_integer(tok);
  }
  if (i != 5) throw Error("usage", "--ainvs takes five integers");
  const std::uint64_t t = schoof_mod_ell(a, p, o.ell);
  const std::uint64_t pm = to_u64(mod(p, Integer(o.ell)));
  out << "ell: " << o.ell << "\ntrace: " << t << " mod " << o.ell << "\n";
  out << "R: t^2 - " << t << "t + " << pm << " mod " << o.ell << "\n";
}

void run_count(const Options& o, const PipelineConfig& cfg, std::ostream& out) {
  CurveModel M = model(o.n);
  out << count_points(M, prime_arg(o), o.mode, o.mode == "mod-ell" ? o.ell : 0, cfg).to_text();
}

void run_cache(const Options& o, const PipelineConfig& cfg, std::ostream& out) {
  if (!cfg.cache.enabled()) throw Error("usage", "no cache directory: pass --cache-dir or set X1_CACHE_DIR");
  if (o.action == "clear") {
    out << "removed: " << cfg.cache.clear() << "\n";
    return;
  }
  out << "dir: " << cfg.cache.dir().string() << "\nversion: " << kCacheVersion << "\n";
  for (const auto& k : cfg.cache.keys()) out << "record: " << k << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Point counting on X_1(n) over F_p via mod-ell Galois representations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "root seed");
  app.add_option("--cache-dir", o.cache_dir, "cache directory (default: $X1_CACHE_DIR)");
  app.add_flag("-v,--verbose", o.verbose, "progress on stderr");

  auto n_opt = [&](CLI::App* s) { s->add_option("--n", o.n, "level")->check(CLI::PositiveNumber); };
  auto ell_opt = [&](CLI::App* s) { s->add_option("--ell", o.ell, "prime ell"); };
  auto p_opt = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--p", o.p, "prime p, e.g. 10^1000+1357");
    if (required) opt->required();
  };
  auto form_opt = [&](CLI::App* s) { s->add_option("--form", o.form, "eigen-system index (1-based)"); };
  auto global_opts = [&](CLI::App* s) {
    s->add_option("--budget", o.budget, "maximum number of CRT primes for P_iota");
    s->add_option("--height-delta", o.height_delta, "bound log H(P_iota) <= n^delta |F|^2 instead of stable reconstruction");
    s->add_option("--holdout", o.holdout, "held-out primes validating P_iota");
    s->add_option("--start", o.start, "first CRT prime");
    s->add_option("--precision", o.precision, "r-adic precision for Gamma_C (0: derived)");
    s->add_flag("--full", o.full, "print the full record");
  };

  auto* eigen = app.add_subcommand("eigen", "Hecke eigen-systems mod ell");
  n_opt(eigen);
  ell_opt(eigen);
  auto* zeta = app.add_subcommand("zeta", "zeta numerator by naive counting (small p)");
  n_opt(zeta);
  p_opt(zeta, true);
  auto* torsion = app.add_subcommand("torsion", "basis of J_1(n)[m] mod p and the Frobenius matrix");
  n_opt(torsion);
  ell_opt(torsion);
  p_opt(torsion, true);
  form_opt(torsion);
  auto* piota = app.add_subcommand("piota", "reconstruct P_iota over Q");
  n_opt(piota);
  ell_opt(piota);
  form_opt(piota);
  global_opts(piota);
  auto* gamma = app.add_subcommand("gamma", "conjugacy-class polynomials Gamma_C");
  n_opt(gamma);
  ell_opt(gamma);
  form_opt(gamma);
  global_opts(gamma);
  auto* frob = app.add_subcommand("frob", "Frobenius classes mod ell at p");
  n_opt(frob);
  ell_opt(frob);
  p_opt(frob, true);
  form_opt(frob);
  global_opts(frob);
  frob->add_option("--route", o.route, "auto | direct | large-p | hecke");
  auto* schoof = app.add_subcommand("schoof", "trace of Frobenius mod ell of an elliptic curve");
  p_opt(schoof, true);
  ell_opt(schoof);
  schoof->add_option("--ainvs", o.ainvs, "a1,a2,a3,a4,a6");
  auto* count = app.add_subcommand("count", "P_n(t) and point counts");
  n_opt(count);
  ell_opt(count);
  p_opt(count, true);
  global_opts(count);
  count->add_option("--mode", o.mode, "mod-ell | exact")->check(CLI::IsMember({"mod-ell", "exact"}));
  count->add_option("--route", o.route, "auto | direct | large-p | hecke");
  count->add_option("--height", o.height, "height bound for P_n (default: Weil bound)");
  auto* cache = app.add_subcommand("cache", "inspect or clear the cache");
  cache->add_option("action", o.action, "inspect | clear")->check(CLI::IsMember({"inspect", "clear"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    const PipelineConfig cfg = config(o, err);
    if (*eigen) run_eigen(o, out);
    if (*zeta) run_zeta(o, out);
    if (*torsion) run_torsion(o, out);
    if (*piota) run_piota(o, cfg, out);
    if (*gamma) run_gamma(o, cfg, out);
    if (*frob) run_frob(o, cfg, out);
    if (*schoof) run_schoof(o, out);
    if (*count) run_count(o, cfg, out);
    if (*cache) run_cache(o, cfg, out);
  } catch (const Error& e) {
    err << "error: code=" << e.code() << " message=" << e.what() << "\n";
    return e.code() == "usage" ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: code=internal message=" << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace x1

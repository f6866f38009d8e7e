#include <map>
#include <set>
#include <sstream>

#include "x1/galois.hpp"

namespace x1 {

std::vector<Gf> iota_table(const CurveModel& M, const TorsionBasis& B) {
  Jacobian J(M, B.field);
  std::vector<Gf> out(B.span.size(), B.field->zero());
  for (std::size_t i = 1; i < B.span.size(); ++i) out[i] = J.iota(B.span[i]);
  return out;
}

Gf iota_eval(const CurveModel& M, const TorsionBasis& B, std::uint64_t x, std::uint64_t y) {
  const std::uint64_t ell = B.sys->ell;
  if ((x % ell == 0 && y % ell == 0)) throw Error("domain", "iota is evaluated away from the origin");
  Jacobian J(M, B.field);
  return J.iota(B.span[(x % ell) * ell + y % ell]);
}

PiotaReduction piota_mod_p(const CurveModel& M, const HeckeEigenSystem& sys, std::uint64_t p, std::uint64_t seed) {
  PiotaReduction out;
  out.p = p;
  out.basis = jm_basis(M, sys, p, seed);
  out.values = iota_table(M, out.basis);
  const GaloisField* K = out.basis.field;
  GfPoly P = GfPoly::constant(K->one());
  for (std::size_t i = 1; i < out.values.size(); ++i) P = P * GfPoly::linear(out.values[i]);
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (!P[i].in_prime_field()) throw Error("model-bug", "P_iota mod p has a coefficient outside F_p");
    out.coeffs.push_back(P[i].to_u64());
  }
  return out;
}

Integer IotaPolynomial::height() const {
  Integer h = 0;
  for (std::size_t i = 0; i < Z.size(); ++i) h = std::max(h, Integer(abs(Z[i])));
  return h;
}

Integer IotaPolynomial::denominator() const { return Z.lead(); }

namespace {

ZPoly primitive_positive(const QPoly& P) {
  ZPoly Z = clear_denominators(P);
  Integer c = 0;
  for (std::size_t i = 0; i < Z.size(); ++i) mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), Z[i].get_mpz_t());
  std::vector<Integer> out;
  for (std::size_t i = 0; i < Z.size(); ++i) out.push_back(Z[i] / c);
  if (out.back() < 0)
    for (auto& x : out) x = -x;
  return ZPoly(std::move(out));
}

bool distinct(const std::vector<Gf>& v) {
  std::set<Gf> s(v.begin() + 1, v.end());
  return s.size() + 1 == v.size();
}

void say(const PiotaOptions& opt, const std::string& s) {
  if (opt.log) opt.log(s);
}

}  // namespace

IotaPolynomial piota_global(const CurveModel& M, const HeckeEigenSystem& sys, const PiotaOptions& opt) {
  const std::uint64_t ell = sys.ell;
  const std::size_t deg = ell * ell - 1;
  IotaPolynomial I;
  I.sys = &sys;
  std::vector<Integer> v(deg + 1, 0);
  Integer mod = 1;
  std::optional<QPoly> last;
  int stable = 0;
  bool done = false;
  std::vector<PiotaReduction> anchors;  // candidates with distinct values

  std::uint64_t p = opt.start > 2 ? opt.start - 1 : 2;
  auto next_good = [&]() -> std::optional<PiotaReduction> {
    for (;;) {
      p = next_prime(p);
      if ((M.level * ell) % p == 0 || !M.is_good(p)) continue;
      if (!definition_field(sys, p).order_ok) continue;
      try {
        return piota_mod_p(M, sys, p, opt.seed);
      } catch (const Error& e) {
        if (e.code() == "model-bug") throw;
        say(opt, "skip p=" + std::to_string(p) + " " + e.code());
        return std::nullopt;
      }
    }
  };

  while (!done) {
    if (I.primes.size() >= opt.max_primes)
      throw Error("prime-budget", "raise prime budget: " + std::to_string(I.primes.size()) + " primes, modulus " +
                                      std::to_string(mpz_sizeinbase(mod.get_mpz_t(), 10)) + " digits");
    auto red = next_good();
    if (!red) continue;
    if (anchors.size() < 3 && distinct(red->values)) anchors.push_back(*red);
    const Integer P(red->p);
    for (std::size_t j = 0; j <= deg; ++j) {
      auto [x, m] = crt_combine({{v[j], mod}, {Integer(red->coeffs[j]), P}});
      v[j] = x;
    }
    mod *= P;
    I.primes.push_back(red->p);
    std::vector<Rational> c;
    if (opt.height_bound) {
      if (mod <= 2 * *opt.height_bound * *opt.height_bound) continue;
      for (std::size_t j = 0; j <= deg; ++j) {
        auto r = rational_reconstruct(v[j], mod, *opt.height_bound, *opt.height_bound);
        if (!r) throw Error("prime-budget", "raise prime budget: coefficient " + std::to_string(j) + " does not reconstruct");
        c.push_back(*r);
      }
      I.P = QPoly(std::move(c));
      done = true;
    } else {
      bool ok = true;
      for (std::size_t j = 0; j <= deg && ok; ++j) {
        auto r = rational_reconstruct(v[j], mod);
        if (r) c.push_back(*r);
        ok = r.has_value();
      }
      if (!ok) {
        stable = 0;
        last.reset();
        continue;
      }
      QPoly cand(std::move(c));
      stable = last && *last == cand ? stable + 1 : 0;
      last = cand;
      say(opt, "p=" + std::to_string(red->p) + " modulus digits " + std::to_string(mpz_sizeinbase(mod.get_mpz_t(), 10)) +
                   " stable " + std::to_string(stable));
      if (stable >= 2) {
        I.P = cand;
        done = true;
      }
    }
  }
  I.Z = primitive_positive(I.P);
  say(opt, "reconstructed with " + std::to_string(I.primes.size()) + " primes, height digits " +
               std::to_string(mpz_sizeinbase(I.height().get_mpz_t(), 10)));

  for (unsigned k = 0; k < opt.holdout;) {
    auto red = next_good();
    if (!red) continue;
    const GaloisField* Fp = GaloisField::get(red->p, 1);
    GfPoly Zp = monic(reduce_poly(I.Z, Fp));
    for (std::size_t j = 0; j <= deg; ++j)
      if (Zp.coeff(j, Fp->zero()).to_u64() != red->coeffs[j])
        throw Error("inconsistent", "held-out prime " + std::to_string(red->p) + " disagrees with P_iota");
    I.holdout.push_back(red->p);
    if (anchors.size() < 3 && distinct(red->values)) anchors.push_back(*red);
    ++k;
  }

  for (const auto& a : anchors) {
    if (I.denominator() % Integer(a.p) == 0) continue;
    I.r = a.p;
    I.anchor_field = a.basis.field;
    I.anchor_values = a.values;
    I.anchor_frobenius = frobenius_matrix_direct(M, a.basis);
    break;
  }
  if (!I.r) throw Error("anchor", "no anchor prime with separated iota values");
  return I;
}

namespace {

std::string gf_list(const Gf& a) {
  std::string s;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) s += (i ? "," : "") + std::to_string(a.coeffs()[i]);
  return s.empty() ? "0" : s;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  return out.str();
}

std::map<std::string, std::string> read_record(const std::string& text, const std::string& format) {
  std::map<std::string, std::string> kv;
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    kv[line.substr(0, colon)] = line.substr(colon + 2);
  }
  if (kv["format"] != format) throw Error("parse", "expected record format " + format);
  return kv;
}

std::vector<std::uint64_t> u64_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::uint64_t x;
  while (ss >> x) out.push_back(x);
  return out;
}

}  // namespace

std::string serialize_iota(const IotaPolynomial& I) {
  std::ostringstream out;
  out << "format: x1-iota 1\n";
  out << "system: " << I.sys->describe() << "\n";
  out << "primes: " << join(I.primes) << "\n";
  out << "holdout: " << join(I.holdout) << "\n";
  std::vector<std::string> z;
  for (std::size_t i = 0; i < I.Z.size(); ++i) z.push_back(I.Z[i].get_str());
  out << "Z: " << join(z) << "\n";
  out << "r: " << I.r << "\n";
  out << "anchor_modulus: " << join(I.anchor_field->modulus()) << "\n";
  std::vector<std::string> vals;
  for (const auto& a : I.anchor_values) vals.push_back(gf_list(a));
  out << "anchor_values: " << join(vals) << "\n";
  out << "anchor_frobenius: " << join(std::vector<std::uint64_t>(I.anchor_frobenius.begin(), I.anchor_frobenius.end()))
      << "\n";
  return out.str();
}

IotaPolynomial parse_iota(const HeckeEigenSystem& sys, const std::string& text) {
  auto kv = read_record(text, "x1-iota 1");
  if (kv["system"] != sys.describe()) throw Error("parse", "iota record belongs to another system");
  IotaPolynomial I;
  I.sys = &sys;
  I.primes = u64_list(kv["primes"]);
  I.holdout = u64_list(kv["holdout"]);
  std::vector<Integer> z;
  std::stringstream zs(kv["Z"]);
  std::string tok;
  while (zs >> tok) z.push_back(Integer(tok));
  I.Z = ZPoly(std::move(z));
  if (I.Z.degree() != static_cast<int>(sys.ell * sys.ell - 1)) throw Error("parse", "P_iota has the wrong degree");
  I.P = to_q(I.Z) * Rational(Rational(1) / Rational(I.Z.lead()));
  I.r = std::stoull(kv["r"]);
  I.anchor_field = GaloisField::with_modulus(I.r, u64_list(kv["anchor_modulus"]));
  std::stringstream vs(kv["anchor_values"]);
  while (vs >> tok) {
    std::vector<std::uint64_t> c;
    std::stringstream cs(tok);
    std::string part;
    while (std::getline(cs, part, ',')) c.push_back(std::stoull(part));
    I.anchor_values.push_back(I.anchor_field->from_coeffs(c));
  }
  if (I.anchor_values.size() != sys.ell * sys.ell) throw Error("parse", "anchor values have the wrong length");
  auto fr = u64_list(kv["anchor_frobenius"]);
  if (fr.size() != 4) throw Error("parse", "anchor Frobenius must have four entries");
  std::copy(fr.begin(), fr.end(), I.anchor_frobenius.begin());
  return I;
}

}  // namespace x1

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "x1/pipeline.hpp"

using namespace x1;

namespace {

const CurveModel& x13() {
  static CurveModel M = CurveModel::bundled(13);
  return M;
}

const std::vector<HeckeEigenSystem>& systems_13_7() {
  static auto sys = eigen_systems_mod_ell(ModularSymbolSpace::build(13), 7);
  return sys;
}

const HeckeEigenSystem& f1() {
  for (const auto& s : systems_13_7())
    if (s.a[2].to_u64() == 1 && s.a[4].to_u64() == 5) return s;
  throw std::runtime_error("f1 missing");
}

// The global artifacts are slow; reuse them across runs through the cache.
PipelineConfig test_config() {
  PipelineConfig cfg;
  cfg.cache = Cache::from_env("x1-test-cache");
  return cfg;
}

const IotaPolynomial& global_iota() {
  static IotaPolynomial I = cached_piota(x13(), f1(), test_config());
  return I;
}

const FrobeniusClassData& global_gamma() {
  static FrobeniusClassData D = cached_gamma(global_iota(), test_config());
  return D;
}

Mat2 act(const Mat2& m, std::uint64_t x, std::uint64_t y, std::uint64_t ell) {
  return {(m[0] * x + m[1] * y) % ell, (m[2] * x + m[3] * y) % ell, 0, 0};
}

Mat2 mat_mul(const Mat2& a, const Mat2& b, std::uint64_t ell) {
  return {(a[0] * b[0] + a[1] * b[2]) % ell, (a[0] * b[1] + a[1] * b[3]) % ell, (a[2] * b[0] + a[3] * b[2]) % ell,
          (a[2] * b[1] + a[3] * b[3]) % ell};
}

Integer trace_naive(const std::array<std::int64_t, 5>& a, std::uint64_t p) {
  const GaloisField* F = GaloisField::get(p, 1);
  Weierstrass E{F->from_int(a[0]), F->from_int(a[1]), F->from_int(a[2]), F->from_int(a[3]), F->from_int(a[4])};
  return Integer(p + 1) - ec_count_naive(E);
}

}  // namespace

TEST_CASE("Galois ring arithmetic and Hensel lifting") {
  for (unsigned d : {1u, 2u, 3u}) {
    const GaloisField* F = GaloisField::get(7, d);
    GaloisRing R(F, 12);
    CHECK(R.modulus() == pow(Integer(7), 12));
    std::mt19937_64 rng(d);
    for (int i = 0; i < 20; ++i) {
      ZnVec a;
      for (unsigned j = 0; j < d; ++j) a.push_back(mod(Integer(rng()) * Integer(rng()), R.modulus()));
      zn_trim(a);
      if (R.reduce(a).is_zero()) continue;
      ZnVec one = R.mul(a, R.inv(a));
      CHECK(one == ZnVec{Integer(1)});
    }
    // x^2 - 2 splits over F_7; x^3 - 2 is irreducible there and splits over F_7^3
    ZPoly f = d == 3 ? ZPoly({Integer(-2), Integer(0), Integer(0), Integer(1)}) : ZPoly({Integer(-2), Integer(0), Integer(1)});
    const std::vector<Gf> rs = roots(reduce_poly(f, F));
    CHECK(rs.size() == static_cast<std::size_t>(f.degree()));
    auto lifted = hensel_lift_ring(R, f, rs);
    REQUIRE(lifted.size() == rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      CHECK(R.reduce(lifted[i]) == rs[i]);
      CHECK(zn_degree(R.eval(f, lifted[i])) < 0);
    }
  }
}

TEST_CASE("conjugacy classes of GL_2(F_ell)") {
  for (std::uint64_t ell : {3u, 5u, 7u}) {
    auto classes = gl2_classes(ell);
    CHECK(classes.size() == ell * ell - 1);
    std::size_t total = 0, central = 0;
    for (const auto& c : classes) {
      total += c.members.size();
      central += c.members.size() == 1;
    }
    CHECK(total == (ell * ell - 1) * (ell * ell - ell));
    CHECK(central == ell - 1);
    // class_of agrees with explicit conjugation
    std::mt19937_64 rng(ell);
    for (int i = 0; i < 200; ++i) {
      Mat2 m{rng() % ell, rng() % ell, rng() % ell, rng() % ell}, g{rng() % ell, rng() % ell, rng() % ell, rng() % ell};
      if ((m[0] * m[3] + ell * ell - m[1] * m[2] % ell) % ell == 0) continue;
      const std::uint64_t dg = (g[0] * g[3] + ell * ell - g[1] * g[2] % ell) % ell;
      if (!dg) continue;
      const std::uint64_t di = invmod_u64(dg, ell);
      Mat2 gi{g[3] * di % ell, (ell - g[1]) * di % ell, (ell - g[2]) * di % ell, g[0] * di % ell};
      const std::size_t c = class_of(classes, m, ell);
      CHECK(class_of(classes, mat_mul(mat_mul(g, m, ell), gi, ell), ell) == c);
      CHECK(classes[c].trace == (m[0] + m[3]) % ell);
    }
  }
}

TEST_CASE("P_iota mod p: degree, seeds and Galois equivariance") {
  const std::uint64_t ell = 7;
  for (std::uint64_t p : {41u, 47u}) {
    PiotaReduction a = piota_mod_p(x13(), f1(), p, 1), b = piota_mod_p(x13(), f1(), p, 2);
    CHECK(a.coeffs.size() == 49);
    CHECK(a.coeffs.back() == 1);
    CHECK(a.coeffs == b.coeffs);
    // Frob(iota(v)) = iota(M v) with M the direct Frobenius matrix
    const Mat2 M = frobenius_matrix_direct(x13(), a.basis);
    for (std::uint64_t x = 0; x < ell; ++x)
      for (std::uint64_t y = 0; y < ell; ++y) {
        if (!x && !y) continue;
        Mat2 v = act(M, x, y, ell);
        CHECK(a.values[v[0] * ell + v[1]] == a.values[x * ell + y].frobenius());
      }
    // two reduction paths to one class
    CHECK(iota_eval(x13(), a.basis, 3, 5) == iota_eval(x13(), a.basis, 10, 12));
  }
}

TEST_CASE("global P_iota: squarefree, held-out primes, anchor") {
  const IotaPolynomial& I = global_iota();
  CHECK(I.P.degree() == 48);
  CHECK(I.Z.degree() == 48);
  CHECK(gcd(I.P, I.P.derivative()).degree() == 0);
  // regression constant for this model's psi and O
  CHECK(I.denominator() == 1331);
  CHECK(I.holdout.size() == 2);
  // one more held-out prime, beyond every prime used so far
  std::uint64_t p = std::max(I.primes.back(), I.holdout.back());
  for (int done = 0; done < 1;) {
    p = next_prime(p);
    if (!definition_field(f1(), p).order_ok) continue;
    PiotaReduction red = piota_mod_p(x13(), f1(), p, 5);
    const GaloisField* Fp = GaloisField::get(p, 1);
    GfPoly Zp = monic(reduce_poly(I.Z, Fp));
    for (std::size_t j = 0; j <= 48; ++j) CHECK(Zp.coeff(j, Fp->zero()).to_u64() == red.coeffs[j]);
    ++done;
  }
  // iota separates at the anchor, and the anchor values are the roots of P_iota mod r
  std::set<Gf> s(I.anchor_values.begin() + 1, I.anchor_values.end());
  CHECK(s.size() == 48);
  GfPoly Zr = reduce_poly(I.Z, I.anchor_field);
  for (std::size_t i = 1; i < 49; ++i) CHECK(Zr.eval(I.anchor_values[i]).is_zero());

  IotaPolynomial J = parse_iota(f1(), serialize_iota(I));
  CHECK(J.Z == I.Z);
  CHECK(J.anchor_values == I.anchor_values);
  CHECK(J.anchor_frobenius == I.anchor_frobenius);
  CHECK(serialize_iota(J) == serialize_iota(I));
}

TEST_CASE("Gamma_C: shape and small-p Frobenius classes") {
  const IotaPolynomial& I = global_iota();
  const FrobeniusClassData& D = global_gamma();
  REQUIRE(D.classes.size() == 48);
  REQUIRE(D.gamma.size() == 48);
  for (std::size_t c = 0; c < 48; ++c) CHECK(D.gamma[c].degree() == static_cast<int>(D.classes[c].members.size()));
  // the anchor's own Frobenius matrix lies in the class its resolvent came from
  const std::size_t anchor = class_of(D.classes, I.anchor_frobenius, 7);
  CHECK(D.classes[anchor].trace == f1().eigenvalue(I.r).to_u64());

  int unique = 0;
  for (std::uint64_t p : {17u, 19u, 41u, 43u, 47u, 61u, 67u, 79u, 97u, 101u}) {
    REQUIRE(definition_field(f1(), p).order_ok);
    TorsionBasis B = jm_basis(x13(), f1(), p, 1);
    const std::size_t direct = class_of(D.classes, frobenius_matrix_direct(x13(), B), 7);
    auto v = vanishing_classes(D, I, Integer(p));
    CHECK(std::find(v.begin(), v.end(), direct) != v.end());
    if (v.size() == 1) {
      ++unique;
      FrobeniusClass c = frobenius_class_large_p(D, I, Integer(p));
      CHECK(c.index == direct);
      CHECK(c.trace == f1().eigenvalue(p).to_u64());
      CHECK(c.det == (f1().character(static_cast<std::int64_t>(p % 13)) * f1().field->from_int(static_cast<std::int64_t>(p)))
                         .to_u64());
    } else {
      CHECK_THROWS_AS(frobenius_class_large_p(D, I, Integer(p)), Error);
    }
  }
  CHECK(unique >= 4);  // 43, 47, 67, 79

  FrobeniusClassData E = parse_gamma(f1(), serialize_gamma(D));
  CHECK(E.gamma == D.gamma);
  CHECK(E.h == D.h);
  CHECK(serialize_gamma(E) == serialize_gamma(D));
}

TEST_CASE("Schoof step against naive counts") {
  const std::array<std::int64_t, 5> e17{1, -1, 1, -1, -14};
  for (std::uint64_t ell : {3u, 5u, 7u, 11u, 13u, 17u}) {
    const Integer t = trace_naive(e17, 101);
    std::array<Integer, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = Integer(e17[i]);
    CHECK(schoof_mod_ell(a, Integer(101), ell) == to_u64(mod(t, Integer(ell))));
  }
  // full Schoof at small p: CRT of the residues pins t inside the Hasse interval
  std::mt19937_64 rng(11);
  for (std::uint64_t p : {1009u, 4001u, 9973u}) {
    for (int i = 0; i < 2; ++i) {
      std::array<std::int64_t, 5> c{0, 0, 0, static_cast<std::int64_t>(rng() % p), static_cast<std::int64_t>(rng() % p)};
      const GaloisField* F = GaloisField::get(p, 1);
      Weierstrass E{F->zero(), F->zero(), F->zero(), F->from_int(c[3]), F->from_int(c[4])};
      if (!E.nonsingular()) continue;
      std::vector<Residue> res;
      Integer M = 1;
      for (std::uint64_t ell = 3; M <= 4 * std::sqrt(double(p)) + 1; ell = next_prime(ell)) {
        res.push_back({Integer(schoof_mod_ell(E, ell)), Integer(ell)});
        M *= ell;
      }
      auto [t, m] = crt_combine(res);
      if (t > m / 2) t -= m;
      CHECK(t == trace_naive(c, p));
    }
  }
  // a rational 3-torsion point forces t = p + 1 mod 3: y^2 = x^3 + 1 has (0, 1)
  for (std::uint64_t p : {101u, 103u, 107u, 109u}) {
    std::array<Integer, 5> a{Integer(0), Integer(0), Integer(0), Integer(0), Integer(1)};
    CHECK(schoof_mod_ell(a, Integer(p), 3) == (p + 1) % 3);
  }
  std::array<Integer, 5> bad{Integer(0), Integer(0), Integer(0), Integer(0), Integer(0)};
  CHECK_THROWS_AS(schoof_mod_ell(bad, Integer(101), 5), Error);
}

#include <chrono>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "x1/factor.hpp"
#include "x1/jacobian.hpp"

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

CurvePoint involution(const Jacobian& J, const CurvePoint& Q) { return {Q.x, -J.h().eval(Q.x) - Q.y}; }

}  // namespace

TEST_CASE("group law axioms on J_1(13)") {
  std::mt19937_64 rng(5);
  for (auto [p, k] : {std::pair{29u, 1u}, std::pair{29u, 2u}}) {
    const GaloisField* F = GaloisField::get(p, k);
    Jacobian J(x13(), F);
    const MumfordDivisor O = J.identity();
    for (int i = 0; i < 500; ++i) {
      MumfordDivisor x = J.random_point(rng), y = J.random_point(rng), z = J.random_point(rng);
      REQUIRE(J.is_valid(x));
      CHECK(J.add(x, y) == J.add(y, x));
      CHECK(J.add(J.add(x, y), z) == J.add(x, J.add(y, z)));
      CHECK(J.add(x, O) == x);
      CHECK(J.add(x, J.neg(x)).is_identity());
      CHECK(J.is_valid(J.add(x, y)));
    }
  }
}

TEST_CASE("points, involution and the class at infinity") {
  std::mt19937_64 rng(6);
  const GaloisField* F = GaloisField::get(31, 1);
  Jacobian J(x13(), F);
  const MumfordDivisor m = J.inf_minus();
  CHECK(m.u.degree() == 0);
  CHECK(m.a == -1);
  CHECK(m.b == 1);
  CHECK(J.iota(m).is_zero());
  for (int i = 0; i < 50; ++i) {
    CurvePoint Q = oracle::random_point(x13(), F, rng);
    CurvePoint R = oracle::random_point(x13(), F, rng);
    // Q + iQ is a fibre of x, linearly equivalent to inf+ + inf-
    CHECK(J.add(J.from_point(Q), J.from_point(involution(J, Q))) == m);
    CHECK(J.iota(J.from_point(Q)) == Q.y);
    MumfordDivisor D = J.add(J.from_point(Q), J.from_point(R));
    if (!(Q.x == R.x)) {
      CHECK(J.theta(D) == 2);
      CHECK(J.iota(D) == Q.y + R.y);
    }
  }
}

TEST_CASE("#J from the zeta function annihilates J") {
  std::mt19937_64 rng(7);
  for (std::uint64_t p : {3u, 5u, 7u, 29u, 31u}) {
    ZetaData z = zeta_naive(x13(), p);
    for (unsigned d : {1u, 2u, 3u}) {
      const GaloisField* F = GaloisField::get(p, d);
      Jacobian J(x13(), F);
      const Integer N = z.jacobian_order(d);
      CHECK(N == jacobian_order(x13(), p, d));
      for (int i = 0; i < 10; ++i) CHECK(J.mul(J.random_point(rng), N).is_identity());
    }
  }
}

TEST_CASE("frobenius numerator agrees on both routes") {
  auto S = ModularSymbolSpace::build(13);
  for (unsigned p : {29u, 31u, 37u}) CHECK(frobenius_numerator(x13(), p) == oracle::hecke_zeta(*S, p));
}

TEST_CASE("rational cuspidal classes are 19-torsion") {
  for (std::uint64_t p : {29u, 31u, 53u}) {
    const GaloisField* F = GaloisField::get(p, 1);
    Jacobian J(x13(), F);
    std::vector<MumfordDivisor> classes{J.inf_minus()};
    for (const auto& [x, y] : x13().rational_cusp_points)
      classes.push_back(J.from_point({F->from_integer(x), F->from_integer(y)}));
    for (const auto& c : classes) {
      CHECK_FALSE(c.is_identity());
      CHECK(J.mul(c, Integer(19)).is_identity());
    }
  }
}

TEST_CASE("Hecke operators on 7-torsion satisfy their modular-symbol relations") {
  auto S = ModularSymbolSpace::build(13);
  std::mt19937_64 rng(8);
  const std::uint64_t p = 41;
  DefinitionField df = definition_field(f1(), p);
  REQUIRE(df.order_ok);
  const GaloisField* K = GaloisField::get(p, df.degree);
  Jacobian J(x13(), K);
  const Integer N = jacobian_order(x13(), p, df.degree);
  for (int i = 0; i < 3; ++i) {
    MumfordDivisor x = ell_torsion_point(J, N, 7, rng);
    MumfordDivisor t2 = hecke_on_torsion(J, x, 2, 7, rng);
    MumfordDivisor t3 = hecke_on_torsion(J, x, 3, 7, rng);
    CHECK(hecke_on_torsion(J, t2, 3, 7, rng) == hecke_on_torsion(J, t3, 2, 7, rng));
    for (unsigned k : {2u, 3u}) {
      // charpoly of T_k on symbols is the square of its charpoly on J
      ZPoly c = hecke_charpoly(*S, k);
      MumfordDivisor acc = J.identity();
      for (int j = c.degree(); j >= 0; --j) acc = J.add(hecke_on_torsion(J, acc, k, 7, rng), J.mul(x, c[j]));
      CHECK(acc.is_identity());
    }
  }
}

TEST_CASE("definition degrees agree with brute-force powers") {
  const HeckeEigenSystem& s = f1();
  const GaloisField* F = s.field;
  for (std::uint64_t p : {29u, 31u, 37u, 41u, 43u, 47u, 53u}) {
    DefinitionField df = definition_field(s, p);
    // order of the companion matrix by enumeration of powers
    Matrix<Gf> C(2, 2, F->zero());
    C(0, 1) = -df.F[0];
    C(1, 0) = F->one();
    C(1, 1) = -df.F[1];
    Matrix<Gf> I = Matrix<Gf>::identity(2, F->zero(), F->one()), P = C;
    unsigned k = 1;
    while (!(P == I)) P = P * C, ++k;
    CHECK(df.degree == k);
  }
}

TEST_CASE("jm_basis at p = 41 for f1") {
  auto t0 = std::chrono::steady_clock::now();
  TorsionBasis B = jm_basis(x13(), f1(), 41, 1);
  MESSAGE("jm_basis(41): " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s, degree "
                           << B.field->degree());
  REQUIRE(B.action.count(2));
  CHECK(B.action.at(2) == std::array<std::uint64_t, 4>{1, 0, 0, 1});
  Jacobian J(x13(), B.field);
  CHECK(J.mul(B.P1, Integer(7)).is_identity());
  CHECK(J.mul(B.P2, Integer(7)).is_identity());
  std::set<MumfordDivisor> s(B.span.begin(), B.span.end());
  CHECK(s.size() == 49);

  TorsionBasis C = parse_basis(x13(), f1(), serialize_basis(x13(), B));
  CHECK(C.P1 == B.P1);
  CHECK(C.P2 == B.P2);
  CHECK(C.field == B.field);
  CHECK(C.action == B.action);
  CHECK(serialize_basis(x13(), C) == serialize_basis(x13(), B));
}

TEST_CASE("direct Frobenius matrices match the zeta numerator mod 7") {
  for (const auto& s : systems_13_7()) {
    int done = 0;
    for (std::uint64_t p : {23u, 29u, 31u, 37u, 41u, 43u, 47u, 53u, 59u, 61u, 67u, 73u}) {
      if (done == 3) break;
      DefinitionField df = definition_field(s, p);
      if (!df.order_ok) continue;
      TorsionBasis B = jm_basis(x13(), s, p, 3);
      auto m = frobenius_matrix_direct(x13(), B);
      const std::uint64_t tr = (m[0] + m[3]) % 7, det = (m[0] * m[3] + 49 - m[1] * m[2] % 7) % 7;
      const GaloisField* F7 = GaloisField::get(7, 1);
      GfPoly charpoly = gfpoly(F7, {static_cast<std::int64_t>(det), -static_cast<std::int64_t>(tr), 1});
      CHECK((reduce_poly(zeta_naive(x13(), p).numerator, F7) % charpoly).is_zero());
      CHECK(tr == s.eigenvalue(p).to_u64());
      const Gf chi_p = s.character(static_cast<std::int64_t>(p % 13));
      CHECK(det == (chi_p * s.field->from_int(static_cast<std::int64_t>(p))).to_u64());
      ++done;
    }
    CHECK(done == 3);
  }
}
TEST_CASE("ell-torsion points and bases") {
  std::mt19937_64 rng(9);
  for (auto [p, d] : {std::pair{41u, 3u}, std::pair{43u, 6u}}) {
    const GaloisField* K = GaloisField::get(p, d);
    Jacobian J(x13(), K);
    const Integer N = jacobian_order(x13(), p, d);
    MumfordDivisor x = ell_torsion_point(J, N, 7, rng);
    CHECK_FALSE(x.is_identity());
    CHECK(J.mul(x, Integer(7)).is_identity());
    auto basis = ell_torsion_basis(J, N, 7, rng);
    CHECK(basis.size() >= 2);
    CHECK(basis.size() <= 4);
    // independence: the span has 7^r distinct elements, all killed by 7
    std::set<MumfordDivisor> span{J.identity()};
    for (const auto& b : basis) {
      CHECK(J.mul(b, Integer(7)).is_identity());
      std::set<MumfordDivisor> grown;
      for (const auto& s : span) {
        MumfordDivisor y = s;
        for (int k = 0; k < 7; ++k, y = J.add(y, b)) grown.insert(y);
      }
      span = std::move(grown);
    }
    std::size_t expect = 1;
    for (std::size_t i = 0; i < basis.size(); ++i) expect *= 7;
    CHECK(span.size() == expect);
    // random 7-torsion lands in the span
    for (int i = 0; i < 5; ++i) CHECK(span.count(ell_torsion_point(J, N, 7, rng)));
  }
}

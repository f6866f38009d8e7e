#include <set>

#include "doctest.h"
#include "x1/modsym.hpp"

using namespace x1;

namespace {

QMatrix to_q(const ZMatrix& A) {
  QMatrix Q(A.rows(), A.cols(), Rational(0));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) Q(i, j) = A(i, j);
  return Q;
}

std::vector<long> values(const HeckeEigenSystem& s, unsigned from, unsigned to) {
  std::vector<long> v;
  for (unsigned k = from; k <= to; ++k) v.push_back(static_cast<long>(s.a[k].index()));
  return v;
}

}  // namespace

TEST_CASE("dimensions of cuspidal symbol spaces") {
  for (auto [n, g] : {std::pair<unsigned, unsigned>{11, 1}, {13, 2}, {17, 5}, {19, 7}}) {
    auto M = ModularSymbolSpace::build(n);
    CHECK(M->genus() == g);
    CHECK(M->dimension() == 2 * g);
  }
  CHECK_THROWS_AS(ModularSymbolSpace::build(7), Error);
  CHECK_THROWS_AS(ModularSymbolSpace::build(15), Error);
}

TEST_CASE("symbol relations hold in the ambient lattice") {
  auto M = ModularSymbolSpace::build(13);
  const long n = 13;
  auto add = [&](std::vector<long>& acc, long c, long d, long s) {
    for (auto [i, x] : M->symbol_vector(c, d)) acc[i] += s * x;
  };
  for (long c = 0; c < n; ++c)
    for (long d = 0; d < n; ++d) {
      if (c == 0 && d == 0) continue;
      std::vector<long> two(M->ambient_dimension(), 0), three(M->ambient_dimension(), 0);
      add(two, c, d, 1);
      add(two, d, -c, 1);
      add(three, c, d, 1);
      add(three, d, -c - d, 1);
      add(three, -c - d, c, 1);
      for (auto x : two) CHECK(x == 0);
      for (auto x : three) CHECK(x == 0);
    }
}

TEST_CASE("hecke matrices: identity, commutativity, multiplicativity") {
  auto M = ModularSymbolSpace::build(13);
  const std::size_t r = M->dimension();
  CHECK(M->hecke_matrix(1) == ZMatrix::identity(r, Integer(0), Integer(1)));
  for (unsigned a = 2; a <= 20; ++a)
    for (unsigned b = a + 1; b <= 20; ++b) CHECK(M->hecke_matrix(a) * M->hecke_matrix(b) == M->hecke_matrix(b) * M->hecke_matrix(a));
  CHECK(M->hecke_matrix(6) == M->hecke_matrix(2) * M->hecke_matrix(3));
  CHECK(M->hecke_matrix(10) == M->hecke_matrix(2) * M->hecke_matrix(5));
  // T_4 = T_2^2 - 2<2>, T_169 = T_13^2
  CHECK(M->hecke_matrix(4) == M->hecke_matrix(2) * M->hecke_matrix(2) - M->diamond_matrix(2) * Integer(2));
  CHECK(M->hecke_matrix(169) == M->hecke_matrix(13) * M->hecke_matrix(13));
  auto M17 = ModularSymbolSpace::build(17);
  for (unsigned a = 2; a <= 20; ++a)
    CHECK(M17->hecke_matrix(a) * M17->hecke_matrix(3) == M17->hecke_matrix(3) * M17->hecke_matrix(a));
}

TEST_CASE("T_2 charpoly at level 13") {
  auto M = ModularSymbolSpace::build(13);
  CHECK(hecke_charpoly(*M, 2) == zpoly({3, 3, 1}));
  CHECK(charpoly_matrix(to_q(M->hecke_matrix(2)), Rational(0), Rational(1)) ==
        to_q(zpoly({3, 3, 1}) * zpoly({3, 3, 1})));
  auto M11 = ModularSymbolSpace::build(11);
  // 11a: a_2 = -2, a_3 = -1, a_5 = 1, a_7 = -2
  CHECK(hecke_charpoly(*M11, 2) == zpoly({2, 1}));
  CHECK(hecke_charpoly(*M11, 3) == zpoly({1, 1}));
  CHECK(hecke_charpoly(*M11, 5) == zpoly({-1, 1}));
  CHECK(hecke_charpoly(*M11, 7) == zpoly({2, 1}));
}

TEST_CASE("Cremona Heilbronn matrices agree with Merel's set") {
  auto M = ModularSymbolSpace::build(13);
  for (unsigned p : {41u, 43u, 47u, 53u}) {
    // T_2p goes through Merel's set (composite), T_p through Cremona's.
    CHECK(M->hecke_matrix(2 * p) == M->hecke_matrix(2) * M->hecke_matrix(p));
    CHECK(M->hecke_matrix(p) * M->hecke_matrix(3) == M->hecke_matrix(3) * M->hecke_matrix(p));
  }
  auto M11 = ModularSymbolSpace::build(11);
  // 11a: a_41 = -8, a_43 = -6, a_47 = 8
  CHECK(hecke_charpoly(*M11, 41) == zpoly({8, 1}));
  CHECK(hecke_charpoly(*M11, 43) == zpoly({6, 1}));
  CHECK(hecke_charpoly(*M11, 47) == zpoly({-8, 1}));
  for (unsigned p : {3u, 5u, 7u, 11u, 13u}) {
    std::set<long> dets;
    for (auto g : heilbronn_cremona(p)) dets.insert(g[0] * g[3] - g[1] * g[2]);
    CHECK(dets == std::set<long>{static_cast<long>(p)});
  }
}

TEST_CASE("eigen-systems at (13, 7)") {
  auto M = ModularSymbolSpace::build(13);
  auto sys = eigen_systems_mod_ell(M, 7);
  REQUIRE(sys.size() == 2);
  std::set<std::vector<long>> got;
  for (const auto& s : sys) {
    CHECK(s.residue_degree() == 1);
    CHECK(s.a[1].is_one());
    got.insert(values(s, 2, 6));
  }
  CHECK(got == std::set<std::vector<long>>{{1, 1, 5, 5, 1}, {3, 4, 3, 2, 5}});
  const HeckeEigenSystem* f1 = nullptr;
  for (const auto& s : sys)
    if (values(s, 2, 6) == std::vector<long>{1, 1, 5, 5, 1}) f1 = &s;
  REQUIRE(f1);
  CHECK(f1->character(2).to_u64() == 5);
  for (const auto& s : sys) {
    CHECK(s.optimal == std::vector<unsigned>{2});
    CHECK(s.bound() >= 28);
  }
}

TEST_CASE("eigen-systems at (13, 5) and (17, 17)") {
  auto M13 = ModularSymbolSpace::build(13);
  for (const auto& s : eigen_systems_mod_ell(M13, 5)) CHECK(s.optimal == std::vector<unsigned>{2});
  auto M17 = ModularSymbolSpace::build(17);
  auto sys = eigen_systems_mod_ell(M17, 17);
  bool found_f1 = false;
  std::set<long> f2_a2;
  unsigned total = 0;
  for (const auto& s : sys) {
    total += s.residue_degree();
    CHECK(s.optimal == std::vector<unsigned>{2});
    if (s.residue_degree() != 1) continue;
    long a2 = static_cast<long>(s.a[2].index());
    if (a2 == 16 && s.a[4].index() == 16 && s.a[5].index() == 15 && s.a[7].index() == 4) found_f1 = true;
    else f2_a2.insert(a2);
  }
  CHECK(found_f1);
  CHECK(f2_a2 == std::set<long>{10, 11, 12, 14});
  CHECK(total == M17->genus());
}

TEST_CASE("character and Hecke recursion invariants") {
  for (auto [n, ell] : {std::pair<unsigned, std::uint64_t>{13, 7}, {13, 5}, {13, 3}, {17, 17}, {17, 3}}) {
    auto M = ModularSymbolSpace::build(n);
    auto sys = eigen_systems_mod_ell(M, ell);
    for (const auto& s : sys) {
      CHECK(s.character(1).is_one());
      CHECK(s.character(n - 1).is_one());
      for (unsigned a = 1; a < n; ++a)
        for (unsigned b = 1; b < n; ++b) CHECK(s.character(a) * s.character(b) == s.character(a * b % n));
      const GaloisField* F = s.field;
      for (unsigned p : {2u, 3u, 5u}) {
        if (p == ell || p * p > s.bound()) continue;
        CHECK(s.a[p * p] == s.a[p] * s.a[p] - F->from_int(p) * s.character(p));
      }
      for (unsigned j = 2; j <= 6; ++j)
        for (unsigned k = j + 1; j * k <= s.bound(); ++k)
          if (std::gcd(j, k) == 1) CHECK(s.a[j * k] == s.a[j] * s.a[k]);
      // extension beyond the computed range agrees with direct evaluation
      CHECK(s.eigenvalue(31) == M->hecke_coordinate(31, s.eigenvector, s.probe) / s.eigenvector[s.probe]);
      CHECK(s.eigenvalue(49) == M->hecke_coordinate(49, s.eigenvector, s.probe) / s.eigenvector[s.probe]);
      // distinct systems differ in the first n coefficients
      for (const auto& t : sys)
        if (&t != &s && t.field == s.field) CHECK(values(s, 2, n) != values(t, 2, n));
    }
  }
}

TEST_CASE("projector data") {
  auto M = ModularSymbolSpace::build(13);
  for (const auto& s : eigen_systems_mod_ell(M, 7)) {
    REQUIRE(s.projectors.size() == 1);
    const auto& d = s.projectors[0];
    CHECK(d.k == 2);
    CHECK(d.A == zpoly({3, 3, 1}));
    CHECK(d.e == 1);
    CHECK(d.B.degree() + d.e == d.A.degree());
    CHECK(!d.B.eval(s.a[2]).is_zero());
    GfPoly lin = gfpoly(s.field, {0, 1}) - GfPoly::constant(s.a[2]);
    CHECK(d.B * lin == reduce_poly(d.A, s.field));
    CHECK(export_system(s).find("optimal 2") != std::string::npos);
  }
}

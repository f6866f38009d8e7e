#include <random>

#include "doctest.h"
#include "x1/factor.hpp"
#include "x1/lattice.hpp"

using namespace x1;

namespace {

ZMatrix zmat(const std::vector<std::vector<long>>& rows) {
  ZMatrix m(rows.size(), rows[0].size(), Integer(0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

// Gram-Schmidt over Q, independent of the integral bookkeeping in lll_reduce.
void check_lll_conditions(const ZMatrix& b, const Rational& delta) {
  const std::size_t n = b.rows(), m = b.cols();
  std::vector<std::vector<Rational>> bs(n, std::vector<Rational>(m));
  std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n, 0));
  std::vector<Rational> B(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < m; ++c) bs[i][c] = b(i, c);
    for (std::size_t j = 0; j < i; ++j) {
      Rational num = 0;
      for (std::size_t c = 0; c < m; ++c) num += Rational(b(i, c)) * bs[j][c];
      mu[i][j] = num / B[j];
      for (std::size_t c = 0; c < m; ++c) bs[i][c] -= mu[i][j] * bs[j][c];
    }
    B[i] = 0;
    for (std::size_t c = 0; c < m; ++c) B[i] += bs[i][c] * bs[i][c];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(abs(mu[i][j]) <= Rational(1, 2));
  for (std::size_t k = 1; k < n; ++k) CHECK(B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]);
}

ReconstructionInstance synthetic(std::mt19937_64& rng, int d, long hmax, bool low_degree_only,
                                 ZPoly& generator) {
  ReconstructionInstance inst;
  inst.degree = d;
  std::vector<Integer> c(d + 1);
  std::uniform_int_distribution<long> coef(-hmax, hmax);
  for (int i = 0; i < d; ++i) c[i] = coef(rng);
  c[d] = 1;
  ZPoly P(c);
  inst.height = hmax;
  std::uniform_int_distribution<std::uint64_t> pr(1000, 60000);
  std::vector<std::uint64_t> used;
  while (!check_sufficiency(inst).ok()) {
    std::uint64_t q = next_prime(pr(rng));
    if (std::find(used.begin(), used.end(), q) != used.end()) continue;
    auto f = poly_factor_ff(reduce_poly(P, GaloisField::get(q, 1)));
    std::vector<GfPoly> cands;
    for (const auto& x : f)
      if (!low_degree_only || x.poly.degree() <= 2) cands.push_back(x.poly);
    if (cands.empty()) continue;
    used.push_back(q);
    const GfPoly& pick = cands[rng() % cands.size()];
    inst.factors.push_back({Integer(q), lift_poly(pick)});
  }
  generator = P;
  return inst;
}

}  // namespace

TEST_CASE("lll on trivial bases") {
  ZMatrix I = ZMatrix::identity(3, Integer(0), Integer(1));
  CHECK(lll_reduce(I) == I);
  Integer K("123456789012345678901234567890");
  ZMatrix shear(2, 2, Integer(0));
  shear(0, 0) = 1;
  shear(1, 0) = K;
  shear(1, 1) = 1;
  ZMatrix r = lll_reduce(shear);
  CHECK(r(0, 0) * r(0, 0) + r(0, 1) * r(0, 1) == 1);
  CHECK_THROWS(lll_reduce(zmat({{1, 2}, {2, 4}})));
}

TEST_CASE("lll reduction properties on random lattices") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> u(-1000000, 1000000);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = 5;
    ZMatrix B(dim, dim, Integer(0));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) B(i, j) = u(rng);
    Integer det = determinant(B);
    if (det == 0) continue;
    ZMatrix U;
    Rational delta(99, 100);
    ZMatrix R = lll_reduce(B, delta, &U);
    CHECK(U * B == R);
    Integer du = determinant(U);
    CHECK((du == 1 || du == -1));
    check_lll_conditions(R, delta);
    // |b1|^(2 dim) <= 2^(dim (dim-1)/2) det^2
    Integer n1 = 0;
    for (std::size_t j = 0; j < dim; ++j) n1 += R(0, j) * R(0, j);
    CHECK(pow(n1, dim) <= pow(Integer(2), dim * (dim - 1) / 2) * det * det);
  }
}

TEST_CASE("reconstruct t^2 - 11t + 13 from four residues") {
  ZPoly P = zpoly({13, -11, 1});
  ReconstructionInstance inst;
  inst.degree = 2;
  inst.height = 13;
  for (long q : {17, 19, 23, 29})
    inst.factors.push_back({Integer(q), lift_poly(reduce_poly(P, GaloisField::get(q, 1)))});
  CHECK(check_sufficiency(inst).ok());
  CHECK(reconstruct_charpoly(inst) == P);
}

TEST_CASE("reconstruct from one huge modulus") {
  ZPoly P = zpoly({-77, 5, 1});
  Integer N = Integer("1000000000000000000000000000057");
  std::vector<Integer> c;
  for (const auto& x : P.coeffs()) c.push_back(mod(x, N));
  ReconstructionInstance inst{2, {{N, ZPoly(c)}}, 100};
  CHECK(reconstruct_charpoly(inst) == P);
}

TEST_CASE("insufficient data is reported with a deficit") {
  ReconstructionInstance inst{2, {{Integer(7), zpoly({1, 1})}}, Integer(1000000)};
  try {
    reconstruct_charpoly(inst);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.code()) == "insufficient-modular-data");
    CHECK(std::string(e.what()).find("deficit") != std::string::npos);
  }
}

TEST_CASE("random quartics from degree-1 and degree-2 factors") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    ZPoly P;
    auto inst = synthetic(rng, 4, 1000, true, P);
    for (const auto& f : inst.factors) CHECK(f.factor.degree() <= 2);
    CHECK(reconstruct_charpoly(inst) == P);
  }
}

TEST_CASE("synthetic instances reconstruct the generator exactly") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    int d = 2 + trial % 5;
    ReconstructionInstance inst;
    inst.degree = d;
    std::vector<Integer> c(d + 1);
    std::uniform_int_distribution<long> coef(-1000000, 1000000);
    for (int i = 0; i < d; ++i) c[i] = coef(rng);
    c[d] = 1;
    ZPoly P(c);
    inst.height = 1000000;
    for (std::uint64_t q = 100003; !check_sufficiency(inst).ok(); q = next_prime(q)) {
      auto f = poly_factor_ff(reduce_poly(P, GaloisField::get(q, 1)));
      inst.factors.push_back({Integer(q), lift_poly(f[rng() % f.size()].poly)});
    }
    CHECK(reconstruct_charpoly(inst) == P);
  }
}

TEST_CASE("prime budget") {
  Integer p = pow(Integer(10), 1000) + 1357;
  auto b = prime_budget(13, p);
  // mpmath at 60 digits: 2 L log L = 514173028553.99096..., L = 13^6 log p
  CHECK(b.formula == Integer("514173028554"));
  CHECK(b.x == b.formula);
  auto o = prime_budget(13, p, Integer(100));
  CHECK(o.x == 100);
  CHECK(o.formula == b.formula);
  CHECK(o.overridden);
  // p = 101: 753787137.3668...
  CHECK(prime_budget(13, Integer(101)).formula == Integer(753787138));
  CHECK(prime_budget(17, p).formula > b.formula);
  CHECK(prime_budget(13, Integer(103)).formula > prime_budget(13, Integer(101)).formula);
  // R for n_f = 2, H = 101^4: 3 log 24 + 6 log H + 3 log 2
  double R = sufficiency_threshold(2, pow(Integer(101), 4));
  CHECK(R == doctest::Approx(3 * std::log(24.0) + 24 * std::log(101.0) + 3 * std::log(2.0)));
}

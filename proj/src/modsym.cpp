#include "x1/modsym.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace x1 {

namespace {

long md(long a, long n) {
  a %= n;
  return a < 0 ? a + n : a;
}

std::size_t sturm_bound(unsigned n) { return (static_cast<std::size_t>(n) * n - 1) / 6; }

// Cusp classes of Gamma_1(n), n prime: u/v with n !| v is determined by +-v,
// with n | v by +-u.
int cusp_v(long v, long n) { return static_cast<int>(std::min(md(v, n), n - md(v, n)) - 1); }
int cusp_u(long u, long n) { return static_cast<int>((n - 1) / 2 + std::min(md(u, n), n - md(u, n)) - 1); }

}  // namespace

std::vector<std::array<long, 4>> merel_set(unsigned k) {
  std::vector<std::array<long, 4>> out;
  const long K = k;
  for (long a = 1; a <= K; ++a) {
    for (long d = (K + a - 1) / a; a + d <= K + 1; ++d) {
      long m = a * d - K;
      if (m == 0) {
        for (long c = 0; c < d; ++c) out.push_back({a, 0, c, d});
        for (long b = 1; b < a; ++b) out.push_back({a, b, 0, d});
        continue;
      }
      for (long b = 1; b < a && b <= m; ++b) {
        if (m % b) continue;
        long c = m / b;
        if (c < d) out.push_back({a, b, c, d});
      }
    }
  }
  return out;
}

std::vector<std::array<long, 4>> heilbronn_cremona(unsigned p) {
  std::vector<std::array<long, 4>> out;
  const long P = p;
  if (P == 2) return {{1, 0, 0, 2}, {2, 0, 0, 1}, {2, 1, 0, 1}, {1, 0, 1, 2}};
  out.push_back({1, 0, 0, P});
  auto round_div = [](long a, long b) {
    // nearest integer, halves away from zero
    long q = a / b, r = a % b;
    if (2 * std::labs(r) >= std::labs(b)) q += ((a < 0) == (b < 0)) ? 1 : -1;
    return q;
  };
  for (long r = -(P / 2); r <= P / 2; ++r) {
    long x1 = P, x2 = -r, y1 = 0, y2 = 1, a = -P, b = r;
    out.push_back({x1, x2, y1, y2});
    while (b != 0) {
      long q = round_div(a, b);
      long c = a - b * q;
      a = -b;
      b = c;
      long x3 = q * x2 - x1;
      x1 = x2;
      x2 = x3;
      long y3 = q * y2 - y1;
      y1 = y2;
      y2 = y3;
      out.push_back({x1, x2, y1, y2});
    }
  }
  return out;
}

std::shared_ptr<const ModularSymbolSpace> ModularSymbolSpace::build(unsigned n) {
  if (n < 11 || !is_prime(static_cast<std::uint64_t>(n)))
    throw Error("unsupported-level", "level must be a prime >= 11, got " + std::to_string(n));
  return std::shared_ptr<const ModularSymbolSpace>(new ModularSymbolSpace(n));
}

ModularSymbolSpace::ModularSymbolSpace(unsigned n) : n_(n) {
  const long N = n;
  const std::size_t total = static_cast<std::size_t>(N) * N;
  // S-orbits: [c,d] = -[d,-c]; orbit representative and sign per symbol.
  std::vector<int> orbit(total, -1), sign(total, 0);
  std::vector<std::size_t> orbit_rep;
  for (long c = 0; c < N; ++c)
    for (long d = 0; d < N; ++d) {
      std::size_t i = c * N + d;
      if (i == 0 || orbit[i] >= 0) continue;
      int id = static_cast<int>(orbit_rep.size());
      orbit_rep.push_back(i);
      long x = c, y = d;
      int s = 1;
      for (int t = 0; t < 4; ++t) {
        std::size_t j = x * N + y;
        orbit[j] = id;
        sign[j] = s;
        long nx = y, ny = md(-x, N);
        x = nx;
        y = ny;
        s = -s;
      }
    }
  const std::size_t O = orbit_rep.size();
  // Three-term relations, one per tau-orbit.
  std::vector<std::vector<Rational>> rows;
  std::vector<bool> seen(total, false);
  for (long c = 0; c < N; ++c)
    for (long d = 0; d < N; ++d) {
      std::size_t i = c * N + d;
      if (i == 0 || seen[i]) continue;
      std::array<std::pair<long, long>, 3> t = {std::pair<long, long>{c, d}, {d, md(-c - d, N)}, {md(-c - d, N), c}};
      std::vector<Rational> row(O, 0);
      for (auto [x, y] : t) {
        std::size_t j = x * N + y;
        seen[j] = true;
        row[orbit[j]] += sign[j];
      }
      rows.push_back(std::move(row));
    }
  QMatrix R(rows.size(), O, Rational(0));
  for (std::size_t i = 0; i < rows.size(); ++i) R.set_row(i, rows[i]);
  auto piv = rref(R);
  std::vector<int> free_pos(O, -1);
  {
    std::vector<bool> is_piv(O, false);
    for (auto p : piv) is_piv[p] = true;
    for (std::size_t j = 0; j < O; ++j)
      if (!is_piv[j]) {
        free_pos[j] = static_cast<int>(free_.size());
        std::size_t s = orbit_rep[j];
        free_.push_back({static_cast<int>(s / N), static_cast<int>(s % N)});
      }
  }
  ambient_dim_ = free_.size();
  std::vector<std::vector<std::pair<int, int>>> orbit_vec(O);
  for (std::size_t j = 0; j < O; ++j)
    if (free_pos[j] >= 0) orbit_vec[j] = {{free_pos[j], 1}};
  for (std::size_t r = 0; r < piv.size(); ++r) {
    auto& v = orbit_vec[piv[r]];
    for (std::size_t j = 0; j < O; ++j) {
      if (free_pos[j] < 0 || R(r, j) == 0) continue;
      Rational x = -R(r, j);
      if (x.get_den() != 1)
        throw Error("non-integral-presentation",
                    "Manin presentation at level " + std::to_string(n) + " is not integral");
      v.push_back({free_pos[j], static_cast<int>(x.get_num().get_si())});
    }
  }
  vec_.assign(total, {});
  for (std::size_t i = 1; i < total; ++i) {
    vec_[i] = orbit_vec[orbit[i]];
    for (auto& e : vec_[i]) e.second *= sign[i];
  }

  // Boundary [a/c] - [b/d] of the free symbols.
  const std::size_t ncusps = N - 1;
  boundary_ = ZMatrix(ambient_dim_, ncusps, Integer(0));
  for (std::size_t j = 0; j < ambient_dim_; ++j) {
    long c = free_[j].first, d = free_[j].second;
    int top = c ? cusp_v(c, N) : cusp_u(static_cast<long>(invmod_u64(d, N)), N);
    int bot = d ? cusp_v(d, N) : cusp_u(md(-static_cast<long>(invmod_u64(c, N)), N), N);
    boundary_(j, top) += 1;
    boundary_(j, bot) -= 1;
  }
  cusp_basis_ = integer_left_kernel(boundary_);
  if (cusp_basis_.rows() != 2 * genus())
    throw Error("model-bug", "cuspidal rank " + std::to_string(cusp_basis_.rows()) +
                                 " differs from 2g = " + std::to_string(2 * genus()));
  QMatrix Q(cusp_basis_.rows(), ambient_dim_, Rational(0));
  for (std::size_t i = 0; i < Q.rows(); ++i)
    for (std::size_t j = 0; j < ambient_dim_; ++j) Q(i, j) = cusp_basis_(i, j);
  QMatrix Qr = Q;
  cusp_pivots_ = rref(Qr);
  const std::size_t r = cusp_basis_.rows();
  QMatrix sub(r, r, Rational(0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) sub(i, j) = Q(i, cusp_pivots_[j]);
  cusp_pivot_inverse_ = inverse_matrix(sub, Rational(0), Rational(1));
}

const std::vector<std::pair<int, int>>& ModularSymbolSpace::symbol_vector(long c, long d) const {
  const long N = n_;
  return vec_[md(c, N) * N + md(d, N)];
}

std::vector<std::pair<int, int>> ModularSymbolSpace::hecke_image(long c, long d, unsigned k) const {
  const long N = n_;
  std::vector<std::pair<int, int>> out;
  const bool cremona = k > 40 && is_prime(static_cast<std::uint64_t>(k));
  const auto mats = cremona ? heilbronn_cremona(k) : merel_set(k);
  out.reserve(mats.size());
  for (const auto& g : mats) {
    long x = md(c * g[0] + d * g[2], N), y = md(c * g[1] + d * g[3], N);
    if (x == 0 && y == 0) continue;
    out.push_back({static_cast<int>(x), static_cast<int>(y)});
  }
  return out;
}

std::vector<Integer> ModularSymbolSpace::ambient_image(unsigned k, std::size_t j) const {
  std::vector<long> acc(ambient_dim_, 0);
  for (auto [x, y] : hecke_image(free_[j].first, free_[j].second, k))
    for (auto [i, s] : vec_[static_cast<std::size_t>(x) * n_ + y]) acc[i] += s;
  std::vector<Integer> out(ambient_dim_);
  for (std::size_t i = 0; i < ambient_dim_; ++i) out[i] = acc[i];
  return out;
}

ZMatrix ModularSymbolSpace::ambient_hecke(unsigned k) const {
  ZMatrix T(ambient_dim_, ambient_dim_, Integer(0));
  for (std::size_t j = 0; j < ambient_dim_; ++j) T.set_row(j, ambient_image(k, j));
  return T;
}

std::vector<Integer> ModularSymbolSpace::to_cuspidal(const std::vector<Integer>& ambient) const {
  const std::size_t r = cusp_basis_.rows();
  std::vector<Rational> sub(r);
  for (std::size_t j = 0; j < r; ++j) sub[j] = ambient[cusp_pivots_[j]];
  auto x = cusp_pivot_inverse_.left_mul(sub);
  std::vector<Integer> out(r);
  for (std::size_t i = 0; i < r; ++i) {
    if (x[i].get_den() != 1) throw Error("model-bug", "vector is not in the cuspidal lattice");
    out[i] = x[i].get_num();
  }
  for (std::size_t j = 0; j < ambient_dim_; ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i < r; ++i) s += out[i] * cusp_basis_(i, j);
    if (s != ambient[j]) throw Error("model-bug", "vector is not in the cuspidal lattice");
  }
  return out;
}

ZMatrix ModularSymbolSpace::hecke_matrix(unsigned k) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = hecke_cache_.find(k);
    if (it != hecke_cache_.end()) return it->second;
  }
  const std::size_t r = cusp_basis_.rows();
  ZMatrix T(r, r, Integer(0));
  if (k == 1) {
    T = ZMatrix::identity(r, Integer(0), Integer(1));
  } else {
    std::vector<std::vector<Integer>> images(ambient_dim_);
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<Integer> acc(ambient_dim_, 0);
      for (std::size_t j = 0; j < ambient_dim_; ++j) {
        if (cusp_basis_(i, j) == 0) continue;
        if (images[j].empty()) images[j] = ambient_image(k, j);
        for (std::size_t t = 0; t < ambient_dim_; ++t) acc[t] += cusp_basis_(i, j) * images[j][t];
      }
      T.set_row(i, to_cuspidal(acc));
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  hecke_cache_[k] = T;
  return T;
}

ZMatrix ModularSymbolSpace::diamond_matrix(long d) const {
  const std::size_t r = cusp_basis_.rows();
  if (md(d, n_) == 0) throw Error("domain", "diamond operator needs d prime to the level");
  ZMatrix D(r, r, Integer(0));
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Integer> acc(ambient_dim_, 0);
    for (std::size_t j = 0; j < ambient_dim_; ++j) {
      if (cusp_basis_(i, j) == 0) continue;
      for (auto [t, s] : symbol_vector(d * free_[j].first, d * free_[j].second)) acc[t] += cusp_basis_(i, j) * s;
    }
    D.set_row(i, to_cuspidal(acc));
  }
  return D;
}

Gf ModularSymbolSpace::hecke_coordinate(unsigned k, const std::vector<Gf>& v, std::size_t coord) const {
  const GaloisField* F = v.at(0).field();
  Gf out = F->zero();
  for (std::size_t j = 0; j < ambient_dim_; ++j) {
    if (v[j].is_zero()) continue;
    long acc = 0;
    for (auto [x, y] : hecke_image(free_[j].first, free_[j].second, k))
      for (auto [i, s] : vec_[static_cast<std::size_t>(x) * n_ + y])
        if (static_cast<std::size_t>(i) == coord) acc += s;
    out += v[j] * F->from_int(acc);
  }
  return out;
}

ZPoly hecke_charpoly(const ModularSymbolSpace& M, unsigned k) {
  ZMatrix T = M.hecke_matrix(k);
  QMatrix Q(T.rows(), T.cols(), Rational(0));
  for (std::size_t i = 0; i < T.rows(); ++i)
    for (std::size_t j = 0; j < T.cols(); ++j) Q(i, j) = T(i, j);
  QPoly c = charpoly_matrix(Q, Rational(0), Rational(1));
  std::vector<Integer> z;
  for (const auto& x : c.coeffs()) {
    if (x.get_den() != 1) throw Error("model-bug", "non-integral Hecke charpoly");
    z.push_back(x.get_num());
  }
  return sqrt_poly(ZPoly(std::move(z)));
}

namespace {

using GfMatrix = Matrix<Gf>;

GfMatrix reduce_matrix(const ZMatrix& A, const GaloisField* F) {
  GfMatrix out(A.rows(), A.cols(), F->zero());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) out(i, j) = F->from_integer(A(i, j));
  return out;
}

GfMatrix lift_matrix(const GfMatrix& A, const GaloisField* F) {
  GfMatrix out(A.rows(), A.cols(), F->zero());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) out(i, j) = F->from_int(static_cast<std::int64_t>(A(i, j).to_u64()));
  return out;
}

// W: rows in rref spanning an X-invariant subspace. Returns Y with W X = Y W.
GfMatrix restrict_to(const GfMatrix& X, const GfMatrix& W, const std::vector<std::size_t>& piv) {
  GfMatrix WX = W * X;
  GfMatrix Y(W.rows(), W.rows(), X(0, 0).field()->zero());
  for (std::size_t i = 0; i < W.rows(); ++i)
    for (std::size_t j = 0; j < W.rows(); ++j) Y(i, j) = WX(i, piv[j]);
  return Y;
}

struct Subspace {
  GfMatrix W;
  std::vector<std::size_t> piv;
};

Subspace make_subspace(const std::vector<std::vector<Gf>>& rows, std::size_t dim) {
  Subspace s{GfMatrix(rows.size(), dim, rows.at(0).at(0).field()->zero()), {}};
  for (std::size_t i = 0; i < rows.size(); ++i) s.W.set_row(i, rows[i]);
  s.piv = rref(s.W);
  return s;
}

// {u W : u g(Y) = 0} for Y the restriction of X to W.
Subspace kernel_in(const Subspace& S, const GfMatrix& Y, const GfPoly& g) {
  const GaloisField* F = S.W(0, 0).field();
  GfMatrix G = poly_eval_matrix(g, Y, F->zero(), F->one());
  auto ker = left_kernel(G, F->zero(), F->one());
  if (ker.empty()) throw Error("model-bug", "empty primary component");
  std::vector<std::vector<Gf>> rows;
  for (const auto& u : ker) rows.push_back(S.W.left_mul(u));
  return make_subspace(rows, S.W.cols());
}

std::vector<std::uint64_t> index_tuple(const std::vector<Gf>& a) {
  std::vector<std::uint64_t> t;
  for (std::size_t k = 2; k < a.size(); ++k) t.push_back(a[k].index());
  return t;
}

unsigned primitive_root_prime(unsigned n, std::uint64_t avoid) {
  auto fac = factor_small(n - 1);
  for (unsigned q = 2; q < 1000; ++q) {
    if (!is_prime(static_cast<std::uint64_t>(q)) || q == avoid || q % n == 0) continue;
    bool prim = true;
    for (auto [r, e] : fac)
      if (powmod_u64(q, (n - 1) / r, n) == 1) prim = false;
    if (prim) return q;
  }
  throw Error("model-bug", "no prime primitive root found");
}

}  // namespace

Gf HeckeEigenSystem::character(std::int64_t m) const {
  std::int64_t r = m % static_cast<std::int64_t>(level);
  if (r < 0) r += level;
  return chi.at(static_cast<std::size_t>(r));
}

Gf HeckeEigenSystem::eigenvalue(std::uint64_t k) const {
  if (k == 0) throw Error("domain", "a_0 is undefined");
  if (k < a.size()) return a[k];
  Gf out = field->one();
  for (auto [p, e] : factor_small(k)) {
    if (p == level) {
      out *= a[level].pow(static_cast<std::uint64_t>(e));
      continue;
    }
    Gf ap = p < a.size() ? a[p]
                         : space->hecke_coordinate(static_cast<unsigned>(p), eigenvector, probe) / eigenvector[probe];
    Gf prev = field->one(), cur = ap;
    Gf pc = field->from_int(static_cast<std::int64_t>(p % ell)) * character(static_cast<std::int64_t>(p));
    for (int i = 1; i < e; ++i) {
      Gf next = ap * cur - pc * prev;
      prev = cur;
      cur = next;
    }
    out *= cur;
  }
  return out;
}

std::string HeckeEigenSystem::describe() const {
  std::ostringstream os;
  os << "level " << level << " mod " << ell << " over " << field->describe() << ": (";
  for (std::size_t k = 2; k <= std::min<std::size_t>(bound(), level); ++k)
    os << (k > 2 ? ", " : "") << "a" << k << "=" << a[k].to_string();
  os << ")";
  return os.str();
}

std::vector<Gf> character_values(const HeckeEigenSystem& sys) {
  const unsigned n = sys.level;
  const GaloisField* F = sys.field;
  const unsigned q = primitive_root_prime(n, sys.ell);
  Gf aq = sys.a.at(q);
  Gf aq2 = static_cast<std::size_t>(q) * q < sys.a.size()
               ? sys.a[static_cast<std::size_t>(q) * q]
               : sys.space->hecke_coordinate(q * q, sys.eigenvector, sys.probe) / sys.eigenvector[sys.probe];
  Gf cq = (aq * aq - aq2) / F->from_int(q);
  std::vector<Gf> chi(n, F->zero());
  Gf v = F->one();
  std::uint64_t r = 1;
  for (unsigned i = 0; i + 1 < n; ++i) {
    chi[r] = v;
    v *= cq;
    r = r * q % n;
  }
  if (!v.is_one()) throw Error("model-bug", "character value at the primitive root has wrong order");
  if (!chi[n - 1].is_one()) throw Error("model-bug", "character is odd");
  return chi;
}

std::vector<unsigned> optimal_set(const HeckeEigenSystem& sys, const std::vector<HeckeEigenSystem>& all) {
  const unsigned n = sys.level;
  unsigned L = 1;
  for (const auto& s : all) L = std::lcm(L, s.residue_degree());
  const GaloisField* big = GaloisField::get(sys.ell, L);
  auto embedded = [&](const HeckeEigenSystem& s) {
    Embedding e = Embedding::find(s.field, big);
    std::vector<Gf> v(n + 1, big->zero());
    for (unsigned k = 2; k <= n; ++k) v[k] = e.map(s.a[k]);
    return v;
  };
  auto self = embedded(sys);
  std::vector<std::vector<Gf>> targets;
  for (const auto& s : all) {
    auto v = embedded(s);
    const bool is_self = v == self;
    for (unsigned j = 0; j < s.residue_degree(); ++j) {
      std::vector<Gf> c = v;
      for (auto& x : c) x = x.frobenius(j);
      if (is_self && j == 0) continue;
      targets.push_back(std::move(c));
    }
  }
  std::vector<std::vector<unsigned>> subsets;
  const unsigned long limit = static_cast<unsigned long>(n) * n;
  std::vector<unsigned> cur;
  auto dfs = [&](auto&& self_ref, unsigned start, unsigned long prod) -> void {
    if (!cur.empty()) subsets.push_back(cur);
    for (unsigned k = start; k <= n; ++k) {
      if (prod * k > limit) break;
      cur.push_back(k);
      self_ref(self_ref, k + 1, prod * k);
      cur.pop_back();
    }
  };
  dfs(dfs, 2, 1);
  auto product = [](const std::vector<unsigned>& s) {
    unsigned long p = 1;
    for (auto k : s) p *= k;
    return p;
  };
  std::sort(subsets.begin(), subsets.end(), [&](const auto& x, const auto& y) {
    auto px = product(x), py = product(y);
    if (px != py) return px < py;
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  });
  for (const auto& S : subsets) {
    bool ok = true;
    for (const auto& t : targets) {
      bool differs = false;
      for (auto k : S)
        if (t[k] != self[k]) differs = true;
      if (!differs) {
        ok = false;
        break;
      }
    }
    if (ok) return S;
  }
  throw Error("no-separating-set", "no subset of [2, n] with product <= n^2 separates " + sys.describe());
}

ProjectorData projector_data(const HeckeEigenSystem& sys, unsigned k) {
  ProjectorData d;
  d.k = k;
  d.A = hecke_charpoly(*sys.space, k);
  GfPoly Af = reduce_poly(d.A, sys.field);
  GfPoly lin = gfpoly(sys.field, {0, 1}) - GfPoly::constant(sys.eigenvalue(k));
  d.e = 0;
  for (;;) {
    auto [q, r] = divrem(Af, lin);
    if (!r.is_zero()) break;
    Af = q;
    ++d.e;
  }
  if (d.e == 0) throw Error("model-bug", "a_k is not a root of the T_k charpoly");
  d.B = Af;
  return d;
}

std::vector<HeckeEigenSystem> eigen_systems_mod_ell(std::shared_ptr<const ModularSymbolSpace> M,
                                                    std::uint64_t ell) {
  if (!is_prime(ell) || ell >= (1ull << 31)) throw Error("domain", "ell must be a prime below 2^31");
  const unsigned n = M->level();
  const std::size_t sturm = sturm_bound(n);
  const std::size_t K = std::max<std::size_t>(sturm, n);
  const std::size_t dim = M->dimension();
  const GaloisField* Fp = GaloisField::get(ell, 1);

  std::vector<GfMatrix> T(sturm + 1);
  for (std::size_t k = 2; k <= sturm; ++k) T[k] = reduce_matrix(M->hecke_matrix(static_cast<unsigned>(k)), Fp);

  // Primary decomposition under T_2, ..., T_sturm.
  std::vector<Subspace> parts;
  {
    std::vector<std::vector<Gf>> id;
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<Gf> r(dim, Fp->zero());
      r[i] = Fp->one();
      id.push_back(r);
    }
    parts.push_back(make_subspace(id, dim));
  }
  std::vector<std::vector<unsigned>> degrees(1);
  for (std::size_t k = 2; k <= sturm; ++k) {
    std::vector<Subspace> next;
    std::vector<std::vector<unsigned>> next_deg;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      GfMatrix Y = restrict_to(T[k], parts[i].W, parts[i].piv);
      auto fac = poly_factor_ff(charpoly_matrix(Y, Fp->zero(), Fp->one()));
      for (const auto& f : fac) {
        auto deg = degrees[i];
        deg.push_back(static_cast<unsigned>(f.poly.degree()));
        if (fac.size() == 1) {
          next.push_back(parts[i]);
        } else {
          GfPoly g = f.poly;
          for (int m = 1; m < f.multiplicity; ++m) g = g * f.poly;
          next.push_back(kernel_in(parts[i], Y, g));
        }
        next_deg.push_back(std::move(deg));
      }
    }
    parts = std::move(next);
    degrees = std::move(next_deg);
  }

  const ZMatrix& C = M->cuspidal_basis();
  std::vector<HeckeEigenSystem> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    unsigned f = 1;
    for (auto d : degrees[i]) f = std::lcm(f, d);
    const GaloisField* F = GaloisField::get(ell, f);
    Subspace U{lift_matrix(parts[i].W, F), parts[i].piv};
    HeckeEigenSystem sys;
    sys.level = n;
    sys.ell = ell;
    sys.field = F;
    sys.space = M;
    sys.subspace_dim = parts[i].W.rows();
    sys.a.assign(K + 1, F->zero());
    sys.a[1] = F->one();
    for (std::size_t k = 2; k <= sturm; ++k) {
      GfMatrix Y = restrict_to(lift_matrix(T[k], F), U.W, U.piv);
      auto rts = roots(charpoly_matrix(Y, F->zero(), F->one()));
      if (rts.empty()) throw Error("model-bug", "T_k has no eigenvalue over the residue field");
      sys.a[k] = rts.front();
      U = kernel_in(U, Y, gfpoly(F, {0, 1}) - GfPoly::constant(rts.front()));
    }
    std::vector<Gf> v = U.W.row(0);  // cuspidal coordinates
    // Galois conjugate with the smallest eigenvalue tuple.
    unsigned best = 0;
    auto conj = [&](unsigned j) {
      std::vector<Gf> c(sys.a.begin(), sys.a.begin() + sturm + 1);
      for (auto& x : c) x = x.frobenius(j);
      return index_tuple(c);
    };
    auto best_t = conj(0);
    for (unsigned j = 1; j < f; ++j) {
      auto t = conj(j);
      if (t < best_t) {
        best_t = t;
        best = j;
      }
    }
    for (auto& x : sys.a) x = x.frobenius(best);
    for (auto& x : v) x = x.frobenius(best);
    sys.eigenvector.assign(M->ambient_dimension(), F->zero());
    for (std::size_t r = 0; r < dim; ++r) {
      if (v[r].is_zero()) continue;
      for (std::size_t j = 0; j < C.cols(); ++j)
        if (C(r, j) != 0) sys.eigenvector[j] += v[r] * F->from_integer(C(r, j));
    }
    sys.probe = 0;
    while (sys.eigenvector[sys.probe].is_zero()) ++sys.probe;
    for (std::size_t k = sturm + 1; k <= K; ++k)
      sys.a[k] = M->hecke_coordinate(static_cast<unsigned>(k), sys.eigenvector, sys.probe) / sys.eigenvector[sys.probe];
    out.push_back(std::move(sys));
  }
  std::sort(out.begin(), out.end(),
            [](const HeckeEigenSystem& x, const HeckeEigenSystem& y) { return index_tuple(x.a) < index_tuple(y.a); });
  for (auto& s : out) s.chi = character_values(s);
  for (auto& s : out) {
    s.optimal = optimal_set(s, out);
    for (auto k : s.optimal) s.projectors.push_back(projector_data(s, k));
  }
  return out;
}

std::string export_system(const HeckeEigenSystem& sys) {
  std::ostringstream os;
  os << "level " << sys.level << "\n";
  os << "ell " << sys.ell << "\n";
  os << "field " << sys.field->describe() << "\n";
  os << "subspace_dim " << sys.subspace_dim << "\n";
  os << "a";
  for (std::size_t k = 1; k <= sys.bound(); ++k) os << " " << sys.a[k].to_string();
  os << "\nchi";
  for (const auto& c : sys.chi) os << " " << c.to_string();
  os << "\noptimal";
  for (auto k : sys.optimal) os << " " << k;
  os << "\n";
  for (const auto& p : sys.projectors) {
    os << "projector " << p.k << " e=" << p.e << " A=" << to_string(p.A) << " B=" << to_string(p.B) << "\n";
  }
  return os.str();
}

}  // namespace x1

#pragma once

#include "gcstar/intdis.hpp"
#include "gcstar/reps.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcstar {

struct SizeGuardError : std::length_error {
  using std::length_error::length_error;
};

inline constexpr int kMaxBisectionArrows = 16;
inline constexpr int kMaxSemigroup = 4096;

// Partial bijection of {0..n-1}; map[x] = -1 outside the domain.
struct PartialBijection {
  std::vector<int> map;

  int points() const { return static_cast<int>(map.size()); }
  bool defined(int x) const { return map[x] >= 0; }
  std::vector<int> domain() const {
    std::vector<int> d;
    for (int x = 0; x < points(); ++x)
      if (map[x] >= 0) d.push_back(x);
    return d;
  }
  std::vector<int> image() const {
    std::vector<int> d;
    for (int v : map)
      if (v >= 0) d.push_back(v);
    std::sort(d.begin(), d.end());
    return d;
  }
  bool injective() const {
    auto im = image();
    return std::adjacent_find(im.begin(), im.end()) == im.end();
  }
  PartialBijection inverse() const {
    PartialBijection p{std::vector<int>(map.size(), -1)};
    for (int x = 0; x < points(); ++x)
      if (map[x] >= 0) p.map[map[x]] = x;
    return p;
  }
  bool operator==(const PartialBijection&) const = default;
};

// a o b
inline PartialBijection compose(const PartialBijection& a, const PartialBijection& b) {
  PartialBijection p{std::vector<int>(b.map.size(), -1)};
  for (int x = 0; x < b.points(); ++x)
    if (b.map[x] >= 0) p.map[x] = a.map[b.map[x]];
  return p;
}

// A bisection is stored by its arrow over each source point (-1 where absent).
using Bisection = std::vector<int>;

inline std::vector<int> arrows_of(const Bisection& a) {
  std::vector<int> out;
  for (int g : a)
    if (g >= 0) out.push_back(g);
  std::sort(out.begin(), out.end());
  return out;
}

// Finite inverse semigroup acting on points by partial bijections. Elements are
// identified by keys: the partial bijection itself, or the bisection's arrows.
struct InverseSemigroup {
  enum class Kind { partial_bijections, bisections };
  Kind kind = Kind::partial_bijections;
  int points = 0;
  std::vector<std::vector<int>> keys;
  std::vector<PartialBijection> theta;
  std::vector<int> table;
  std::vector<int> inv;

  int size() const { return static_cast<int>(keys.size()); }
  int mul(int a, int b) const { return table[static_cast<std::size_t>(a) * keys.size() + b]; }
  bool idempotent(int a) const { return mul(a, a) == a; }
  // a <= b iff a = b a* a
  bool leq(int a, int b) const { return mul(b, mul(inv[a], a)) == a; }
  std::vector<int> source_domain(int a) const { return theta[a].domain(); }
  std::vector<int> range_domain(int a) const { return theta[a].image(); }
  std::string name(int a) const { return "s" + std::to_string(a); }
};

namespace detail {

template <class Mul, class Inv, class Theta>
InverseSemigroup close_semigroup(InverseSemigroup::Kind kind, int points, std::vector<std::vector<int>> gens, Mul mul,
                                 Inv inv, Theta theta) {
  InverseSemigroup S;
  S.kind = kind;
  S.points = points;
  std::map<std::vector<int>, int> index;
  auto add = [&](const std::vector<int>& k) {
    auto [it, fresh] = index.emplace(k, static_cast<int>(S.keys.size()));
    if (fresh) {
      if (static_cast<int>(S.keys.size()) >= kMaxSemigroup)
        throw SizeGuardError("inverse semigroup exceeds " + std::to_string(kMaxSemigroup) + " elements");
      S.keys.push_back(k);
    }
    return it->second;
  };
  for (const auto& g : gens) {
    add(g);
    add(inv(g));
  }
  for (std::size_t i = 0; i < S.keys.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const auto a = S.keys[i], b = S.keys[j];
      add(mul(a, b));
      add(mul(b, a));
    }
  const std::size_t n = S.keys.size();
  S.table.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) S.table[i * n + j] = index.at(mul(S.keys[i], S.keys[j]));
  for (std::size_t i = 0; i < n; ++i) {
    S.inv.push_back(index.at(inv(S.keys[i])));
    S.theta.push_back(theta(S.keys[i]));
  }
  return S;
}

}  // namespace detail

inline InverseSemigroup generate_semigroup(int points, const std::vector<PartialBijection>& gens) {
  std::vector<std::vector<int>> keys;
  for (const auto& g : gens) {
    if (g.points() != points || !g.injective()) throw std::invalid_argument("generator is not a partial bijection");
    keys.push_back(g.map);
  }
  return detail::close_semigroup(
      InverseSemigroup::Kind::partial_bijections, points, keys,
      [](const std::vector<int>& a, const std::vector<int>& b) { return compose(PartialBijection{a}, PartialBijection{b}).map; },
      [](const std::vector<int>& a) { return PartialBijection{a}.inverse().map; },
      [](const std::vector<int>& a) { return PartialBijection{a}; });
}

inline bool is_bisection(const FiniteGroupoid& G, const std::vector<int>& arrows) {
  std::vector<int> s, r;
  for (int g : arrows) {
    s.push_back(G.src[g]);
    r.push_back(G.rng[g]);
  }
  std::sort(s.begin(), s.end());
  std::sort(r.begin(), r.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end() && std::adjacent_find(r.begin(), r.end()) == r.end();
}

inline Bisection bisection_from_arrows(const FiniteGroupoid& G, const std::vector<int>& arrows) {
  if (!is_bisection(G, arrows)) throw std::invalid_argument("not a bisection");
  Bisection b(static_cast<std::size_t>(G.objects()), -1);
  for (int g : arrows) b[G.src[g]] = g;
  return b;
}

inline std::vector<Bisection> all_bisections(const FiniteGroupoid& G) {
  if (G.arrows() > kMaxBisectionArrows)
    throw SizeGuardError("all_bisections: more than " + std::to_string(kMaxBisectionArrows) + " arrows");
  std::vector<Bisection> out;
  const int n1 = G.arrows();
  for (std::uint32_t mask = 0; mask < (1u << n1); ++mask) {
    std::vector<int> arrows;
    for (int g = 0; g < n1; ++g)
      if (mask & (1u << g)) arrows.push_back(g);
    if (is_bisection(G, arrows)) out.push_back(bisection_from_arrows(G, arrows));
  }
  return out;
}

inline InverseSemigroup bisection_semigroup(const FiniteGroupoid& G, const std::vector<Bisection>& gens) {
  auto mul = [&G](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> ab(b.size(), -1);
    for (std::size_t x = 0; x < b.size(); ++x)
      if (b[x] >= 0 && a[G.rng[b[x]]] >= 0) ab[x] = G.compose(a[G.rng[b[x]]], b[x]);
    return ab;
  };
  auto inv = [&G](const std::vector<int>& a) {
    std::vector<int> ai(a.size(), -1);
    for (int g : a)
      if (g >= 0) ai[G.rng[g]] = G.inv[g];
    return ai;
  };
  auto theta = [&G](const std::vector<int>& a) {
    PartialBijection p{std::vector<int>(a.size(), -1)};
    for (std::size_t x = 0; x < a.size(); ++x)
      if (a[x] >= 0) p.map[x] = G.rng[a[x]];
    return p;
  };
  return detail::close_semigroup(InverseSemigroup::Kind::bisections, G.objects(), gens, mul, inv, theta);
}

// Union covers G1 and u n t is the union of the v <= u, t.
inline bool is_wide(const InverseSemigroup& S, const FiniteGroupoid& G) {
  if (S.kind != InverseSemigroup::Kind::bisections) return false;
  std::vector<bool> covered(static_cast<std::size_t>(G.arrows()), false);
  for (const auto& k : S.keys)
    for (int g : k)
      if (g >= 0) covered[g] = true;
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) return false;
  for (int u = 0; u < S.size(); ++u)
    for (int t = 0; t < S.size(); ++t) {
      std::vector<int> meet, below;
      const auto au = arrows_of(S.keys[u]), at = arrows_of(S.keys[t]);
      std::set_intersection(au.begin(), au.end(), at.begin(), at.end(), std::back_inserter(meet));
      for (int v = 0; v < S.size(); ++v)
        if (S.leq(v, u) && S.leq(v, t))
          for (int g : arrows_of(S.keys[v])) below.push_back(g);
      std::sort(below.begin(), below.end());
      below.erase(std::unique(below.begin(), below.end()), below.end());
      if (below != meet) return false;
    }
  return true;
}

struct GermGroupoid {
  FiniteGroupoid G;
  std::vector<std::vector<int>> chart;  // chart[a][x] = germ of (a, x), -1 outside the domain
};

namespace detail {
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void join(int a, int b) { parent[find(a)] = find(b); }
};
}  // namespace detail

inline GermGroupoid germ_groupoid(const InverseSemigroup& S) {
  const int n = S.points, m = S.size();
  detail::UnionFind uf(m * n);
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c)
      if (c != a && S.leq(c, a))
        for (int x : S.source_domain(c)) uf.join(c * n + x, a * n + x);
  GermGroupoid out;
  out.chart.assign(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(n), -1));
  std::map<int, int> cls;
  std::vector<std::pair<int, int>> rep;
  for (int a = 0; a < m; ++a)
    for (int x : S.source_domain(a)) {
      auto [it, fresh] = cls.emplace(uf.find(a * n + x), static_cast<int>(rep.size()));
      if (fresh) rep.emplace_back(a, x);
      out.chart[a][x] = it->second;
    }
  auto& G = out.G;
  for (int x = 0; x < n; ++x) G.object_names.push_back(std::to_string(x + 1));
  for (auto [a, x] : rep) {
    G.arrow_names.push_back("[" + S.name(a) + "," + std::to_string(x + 1) + "]");
    G.src.push_back(x);
    G.rng.push_back(S.theta[a].map[x]);
  }
  const int n1 = static_cast<int>(rep.size());
  G.comp.assign(static_cast<std::size_t>(n1) * n1, -1);
  for (int g = 0; g < n1; ++g)
    for (int h = 0; h < n1; ++h) {
      if (G.src[g] != G.rng[h]) continue;
      const auto [a, y] = rep[g];
      const auto [b, x] = rep[h];
      G.compose_ref(g, h) = out.chart[S.mul(a, b)][x];
    }
  G.inv.resize(static_cast<std::size_t>(n1));
  for (int g = 0; g < n1; ++g) {
    const auto [a, x] = rep[g];
    G.inv[g] = out.chart[S.inv[a]][S.theta[a].map[x]];
  }
  G.unit.assign(static_cast<std::size_t>(n), -1);
  for (int e = 0; e < m; ++e)
    if (S.idempotent(e))
      for (int x : S.source_domain(e)) G.unit[x] = out.chart[e][x];
  for (int x = 0; x < n; ++x)
    if (G.unit[x] < 0) throw std::invalid_argument("germ_groupoid: point " + std::to_string(x + 1) + " lies in no idempotent domain");
  if (auto r = validate_groupoid(G); !r.ok())
    throw std::logic_error("germ_groupoid: " + r.violations[0].axiom + " fails at " + r.violations[0].witness);
  return out;
}

// For a bisection semigroup: germ [(a,x)] |-> a[x], checked to be an isomorphism onto G.
inline Report germ_isomorphism(const InverseSemigroup& S, const GermGroupoid& germs, const FiniteGroupoid& G) {
  Report rep;
  const int n1 = germs.G.arrows();
  std::vector<int> to(static_cast<std::size_t>(n1), -1);
  bool welldef = true;
  for (int a = 0; a < S.size(); ++a)
    for (int x = 0; x < S.points; ++x) {
      const int germ = germs.chart[a][x];
      if (germ < 0) continue;
      if (to[germ] >= 0 && to[germ] != S.keys[a][x]) welldef = false;
      to[germ] = S.keys[a][x];
    }
  rep.add("well-defined", welldef);
  std::vector<int> hit(static_cast<std::size_t>(G.arrows()), 0);
  for (int g : to)
    if (g >= 0) ++hit[g];
  const bool bij = n1 == G.arrows() && std::all_of(hit.begin(), hit.end(), [](int c) { return c == 1; });
  rep.add("bijective", bij, 0.0, std::to_string(n1) + " germs, " + std::to_string(G.arrows()) + " arrows");
  if (!bij || !welldef) return rep;
  bool hom = true;
  for (int g = 0; g < n1; ++g) {
    hom = hom && germs.G.src[g] == G.src[to[g]] && germs.G.rng[g] == G.rng[to[g]];
    for (int h = 0; h < n1; ++h) {
      const int gh = germs.G.compose(g, h);
      if (gh >= 0) hom = hom && to[gh] == G.compose(to[g], to[h]);
    }
  }
  rep.add("homomorphism", hom);
  return rep;
}

// Span of f_a delta_a modulo f delta_a = f delta_b for a <= b, with point-mass basis 1_y delta_a.
struct CrossedProductAlgebra {
  InverseSemigroup S;
  std::vector<std::pair<int, int>> basis;  // representative (a, y), y in D_{aa*}
  std::vector<int> class_of;               // a * points + y -> basis index, or -1
  std::vector<int> product;                // dim x dim -> basis index, or -1 for zero
  std::vector<int> star;

  int dim() const { return static_cast<int>(basis.size()); }
  int cls(int a, int y) const { return class_of[static_cast<std::size_t>(a) * S.points + y]; }
  int mul(int i, int j) const { return product[static_cast<std::size_t>(i) * basis.size() + j]; }

  std::vector<cx> multiply(const std::vector<cx>& p, const std::vector<cx>& q) const {
    std::vector<cx> out(basis.size(), 0.0);
    for (int i = 0; i < dim(); ++i)
      if (p[i] != cx(0.0))
        for (int j = 0; j < dim(); ++j)
          if (q[j] != cx(0.0) && mul(i, j) >= 0) out[mul(i, j)] += p[i] * q[j];
    return out;
  }
};

inline CrossedProductAlgebra crossed_product(const InverseSemigroup& S) {
  if (S.size() > kMaxSemigroup) throw SizeGuardError("crossed_product: semigroup too large");
  const int n = S.points, m = S.size();
  detail::UnionFind uf(m * n);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b && S.leq(a, b))
        for (int y : S.range_domain(a)) uf.join(a * n + y, b * n + y);
  CrossedProductAlgebra A;
  A.S = S;
  A.class_of.assign(static_cast<std::size_t>(m) * n, -1);
  std::map<int, int> root;
  for (int a = 0; a < m; ++a)
    for (int y : S.range_domain(a)) {
      auto [it, fresh] = root.emplace(uf.find(a * n + y), A.dim());
      if (fresh) A.basis.emplace_back(a, y);
      A.class_of[static_cast<std::size_t>(a) * n + y] = it->second;
    }
  // (1_y delta_a)(1_z delta_b) = [z = theta_{a*}(y)] 1_y delta_{ab}
  auto prod = [&](int a, int y, int b, int z) {
    const int back = S.theta[S.inv[a]].map[y];
    return back == z && S.theta[b].inverse().map[z] >= 0 ? A.cls(S.mul(a, b), y) : -1;
  };
  const int d = A.dim();
  A.product.assign(static_cast<std::size_t>(d) * d, -1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const auto [a, y] = A.basis[i];
      const auto [b, z] = A.basis[j];
      A.product[static_cast<std::size_t>(i) * d + j] = prod(a, y, b, z);
    }
  // Independence of representatives.
  for (int a = 0; a < m; ++a)
    for (int y : S.range_domain(a))
      for (int b = 0; b < m; ++b)
        for (int z : S.range_domain(b))
          if (prod(a, y, b, z) != A.mul(A.cls(a, y), A.cls(b, z)))
            throw std::logic_error("crossed_product: product depends on representatives");
  for (int i = 0; i < d; ++i) {
    const auto [a, y] = A.basis[i];
    A.star.push_back(A.cls(S.inv[a], S.theta[S.inv[a]].map[y]));
  }
  return A;
}

// A representation of the crossed product by the images of the basis elements.
struct CrossedRep {
  Correspondence space;
  std::vector<Mat> ops;
};

inline Report check_crossed_rep(const CrossedRep& rho, const CrossedProductAlgebra& A, double tol = kTol) {
  Report rep;
  double md = 0.0, sd = 0.0;
  const Mat zero = Mat::Zero(rho.space.dim(), rho.space.dim());
  for (int i = 0; i < A.dim(); ++i) {
    for (int j = 0; j < A.dim(); ++j) {
      const Mat& expect = A.mul(i, j) >= 0 ? rho.ops[A.mul(i, j)] : zero;
      md = std::max(md, max_abs(ModuleMap{rho.space, rho.space, rho.ops[i] * rho.ops[j] - expect}.normalized()));
    }
    sd = std::max(sd, max_abs(adjoint(ModuleMap{rho.space, rho.space, rho.ops[i]}).normalized() -
                              ModuleMap{rho.space, rho.space, rho.ops[A.star[i]]}.normalized()));
  }
  rep.bound("multiplicative", md, tol);
  rep.bound("star", sd, tol);
  return rep;
}

inline CrossedRep crossed_regular_rep(const CrossedProductAlgebra& A) {
  CrossedRep rho;
  rho.space.z_size = 1;
  rho.space.y_size = 1;
  for (int i = 0; i < A.dim(); ++i) rho.space.push(0, 0, 1.0);
  for (int i = 0; i < A.dim(); ++i) {
    Mat m = Mat::Zero(A.dim(), A.dim());
    for (int j = 0; j < A.dim(); ++j)
      if (A.mul(i, j) >= 0) m(A.mul(i, j), j) = 1.0;
    rho.ops.push_back(m);
  }
  return rho;
}

// Grading over the points plus U_a : H_{a*a} -> H_{aa*}.
struct CovariantRep {
  Correspondence space;
  std::vector<Mat> U;  // U[a]: fibres over range_domain(a) x fibres over source_domain(a)
};

inline std::vector<int> indices_over(const Correspondence& H, const std::vector<int>& pts) {
  std::vector<int> out;
  for (int i = 0; i < H.dim(); ++i)
    if (std::find(pts.begin(), pts.end(), H.left[i]) != pts.end()) out.push_back(i);
  return out;
}

inline Mat projection(const Correspondence& H, const std::vector<int>& pts) {
  Mat p = Mat::Zero(H.dim(), H.dim());
  for (int i : indices_over(H, pts)) p(i, i) = 1.0;
  return p;
}

inline std::vector<Mat> partial_isometry_form(const CovariantRep& cov, const InverseSemigroup& S) {
  std::vector<Mat> out;
  for (int a = 0; a < S.size(); ++a) {
    const auto rows = indices_over(cov.space, S.range_domain(a)), cols = indices_over(cov.space, S.source_domain(a));
    Mat m = Mat::Zero(cov.space.dim(), cov.space.dim());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) m(rows[i], cols[j]) = cov.U[a](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    out.push_back(m);
  }
  return out;
}

inline CovariantRep from_partial_isometries(const Correspondence& H, const InverseSemigroup& S, const std::vector<Mat>& V) {
  CovariantRep cov{H, {}};
  for (int a = 0; a < S.size(); ++a) {
    const auto rows = indices_over(H, S.range_domain(a)), cols = indices_over(H, S.source_domain(a));
    Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = V[a](rows[i], cols[j]);
    cov.U.push_back(m);
  }
  return cov;
}

// Restriction, involution, multiplicativity on matching projections, covariance; plus unitarity.
inline Report check_covariant(const CovariantRep& cov, const InverseSemigroup& S, double tol = kTol) {
  Report rep;
  const auto& H = cov.space;
  const auto V = partial_isometry_form(cov, S);
  auto n = [&](const Mat& m) { return ModuleMap{H, H, m}.normalized(); };
  double d1 = 0, d2 = 0, d3 = 0, d4 = 0, du = 0;
  std::string w1, w3;
  for (int a = 0; a < S.size(); ++a) {
    const Mat Na = n(V[a]);
    du = std::max(du, max_abs(Na.adjoint() * Na - projection(H, S.source_domain(a))));
    du = std::max(du, max_abs(Na * Na.adjoint() - projection(H, S.range_domain(a))));
    d2 = std::max(d2, max_abs(Na.adjoint() - n(V[S.inv[a]])));
    for (int x : S.source_domain(a)) {
      const Mat lhs = Na * projection(H, {x}) * Na.adjoint();
      d4 = std::max(d4, max_abs(lhs - projection(H, {S.theta[a].map[x]})));
    }
    for (int b = 0; b < S.size(); ++b) {
      if (S.leq(a, b)) {
        const double d = max_abs(n(V[b]) * projection(H, S.source_domain(a)) - Na);
        if (d > d1) {
          d1 = d;
          w1 = "(" + S.name(a) + "<=" + S.name(b) + ")";
        }
      }
      if (S.mul(S.inv[a], a) == S.mul(b, S.inv[b])) {
        const double d = max_abs(Na * n(V[b]) - n(V[S.mul(a, b)]));
        if (d > d3) {
          d3 = d;
          w3 = "(" + S.name(a) + "," + S.name(b) + ")";
        }
      }
    }
  }
  rep.bound("unitary", du, tol);
  rep.bound("axiom-1-restriction", d1, tol, d1 > tol ? w1 : std::string{});
  rep.bound("axiom-2-involution", d2, tol);
  rep.bound("axiom-3-multiplicative", d3, tol, d3 > tol ? w3 : std::string{});
  rep.bound("axiom-4-covariance", d4, tol);
  return rep;
}

// U_a U_b = U_ab for all a, b, and H_e n H_f = H_ef for idempotents.
inline Report check_partial_isometries(const std::vector<Mat>& V, const Correspondence& H, const InverseSemigroup& S,
                                       double tol = kTol) {
  Report rep;
  double d = 0, e = 0;
  auto n = [&](const Mat& m) { return ModuleMap{H, H, m}.normalized(); };
  for (int a = 0; a < S.size(); ++a)
    for (int b = 0; b < S.size(); ++b) {
      d = std::max(d, max_abs(n(V[a]) * n(V[b]) - n(V[S.mul(a, b)])));
      if (S.idempotent(a) && S.idempotent(b))
        e = std::max(e, max_abs(projection(H, S.source_domain(a)) * projection(H, S.source_domain(b)) -
                                projection(H, S.source_domain(S.mul(a, b)))));
    }
  rep.bound("product-law", d, tol);
  rep.bound("idempotent-meets", e, tol);
  return rep;
}

// rho(1_y delta_a) = phi(1_y) U_a.
inline CrossedRep integrate_covariant(const CovariantRep& cov, const CrossedProductAlgebra& A) {
  const auto V = partial_isometry_form(cov, A.S);
  CrossedRep rho{cov.space, {}};
  for (auto [a, y] : A.basis) rho.ops.push_back(projection(cov.space, {y}) * V[a]);
  return rho;
}

// phi(1_x) = rho(1_x delta_e) for any idempotent e over x; U_a = sum_y rho(1_y delta_a).
inline CovariantRep rep_of_crossed_to_covariant(const CrossedRep& rho, const CrossedProductAlgebra& A, double tol = kTol) {
  const auto& S = A.S;
  const int n = S.points;
  Correspondence H = rho.space;
  H.z_size = n;
  std::vector<int> label(static_cast<std::size_t>(H.dim()), -1);
  for (int x = 0; x < n; ++x) {
    int e = -1;
    for (int a = 0; a < S.size() && e < 0; ++a)
      if (S.idempotent(a) && S.theta[a].defined(x)) e = a;
    if (e < 0) throw std::invalid_argument("point " + std::to_string(x + 1) + " lies in no idempotent domain");
    const Mat P = ModuleMap{rho.space, rho.space, rho.ops[A.cls(e, x)]}.normalized();
    for (int i = 0; i < H.dim(); ++i) {
      const double off = P.col(i).cwiseAbs().sum() - std::abs(P(i, i));
      if (off > tol || (std::abs(P(i, i)) > tol && std::abs(P(i, i) - 1.0) > tol))
        throw std::invalid_argument("rep_of_crossed_to_covariant: grading is not diagonal in the given basis");
      if (std::abs(P(i, i) - 1.0) <= tol) {
        if (label[i] >= 0) throw std::invalid_argument("rep_of_crossed_to_covariant: overlapping point projections");
        label[i] = x;
      }
    }
  }
  for (int i = 0; i < H.dim(); ++i) {
    if (label[i] < 0) throw std::invalid_argument("rep_of_crossed_to_covariant: degenerate representation");
    H.left[i] = label[i];
  }
  std::vector<Mat> V;
  for (int a = 0; a < S.size(); ++a) {
    Mat m = Mat::Zero(H.dim(), H.dim());
    for (int y : S.range_domain(a)) m += rho.ops[A.cls(a, y)];
    V.push_back(m);
  }
  return from_partial_isometries(H, S, V);
}

// chart[a][x] = arrow of the bisection a with source x (keys of a bisection semigroup).
inline std::vector<std::vector<int>> bisection_chart(const InverseSemigroup& S) {
  if (S.kind == InverseSemigroup::Kind::bisections) return S.keys;
  return germ_groupoid(S).chart;
}

// U_a = restriction of the cocycle to the arrows of a. Requires counting Haar.
inline CovariantRep groupoid_rep_to_covariant(const Representation& rep, const InverseSemigroup& S,
                                              const std::vector<std::vector<int>>& chart) {
  if (!rep.base.counting()) throw std::invalid_argument("groupoid_rep_to_covariant: Haar system is not counting measure");
  const auto fam = blockwise(rep);
  const auto& G = rep.base.G;
  std::vector<Mat> V;
  for (int a = 0; a < S.size(); ++a) {
    Mat m = Mat::Zero(rep.module.dim(), rep.module.dim());
    for (int x = 0; x < S.points; ++x)
      if (chart[a][x] >= 0) m += embed(rep.module, G.rng[chart[a][x]], G.src[chart[a][x]], fam.U[chart[a][x]]);
    V.push_back(m);
  }
  return from_partial_isometries(rep.module, S, V);
}

struct Reassembly {
  Representation rep;
  Report report;
};

// Reassemble U_g from the bisection cover, check agreement and the trisection cover of G2.
inline Reassembly covariant_to_groupoid_rep(const CovariantRep& cov, const InverseSemigroup& S,
                                            const std::vector<std::vector<int>>& chart, const MeasuredGroupoid& M,
                                            double tol = kTol) {
  if (!M.counting()) throw std::invalid_argument("covariant_to_groupoid_rep: Haar system is not counting measure");
  const auto& G = M.G;
  const auto V = partial_isometry_form(cov, S);
  Reassembly out;
  CocycleFamily fam{cov.space, std::vector<Mat>(static_cast<std::size_t>(G.arrows()))};
  std::vector<bool> seen(static_cast<std::size_t>(G.arrows()), false);
  double agree = 0.0;
  for (int a = 0; a < S.size(); ++a)
    for (int x = 0; x < S.points; ++x) {
      const int g = chart[a][x];
      if (g < 0) continue;
      const auto rows = fibre_indices(cov.space, G.rng[g]), cols = fibre_indices(cov.space, G.src[g]);
      Mat blk(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) blk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = V[a](rows[i], cols[j]);
      if (seen[g]) agree = std::max(agree, max_abs(blk - fam.U[g]));
      else fam.U[g] = blk;
      seen[g] = true;
    }
  const bool covered = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  out.report.add("cover", covered);
  out.report.bound("restrictions-agree", agree, tol);
  // Every composable pair lies in a trisection a x_{s,r} b with a*a = bb*.
  std::string missing;
  for (int g = 0; g < G.arrows() && missing.empty(); ++g)
    for (int h = 0; h < G.arrows(); ++h) {
      if (!G.composable(g, h)) continue;
      bool found = false;
      for (int a = 0; a < S.size() && !found; ++a) {
        if (chart[a][G.src[g]] != g) continue;
        for (int b = 0; b < S.size() && !found; ++b)
          found = chart[b][G.src[h]] == h && S.mul(S.inv[a], a) == S.mul(b, S.inv[b]);
      }
      if (!found) {
        missing = G.tuple({g, h});
        break;
      }
    }
  out.report.add("trisection-cover", missing.empty(), 0.0, missing);
  if (!covered) return out;
  out.rep = from_cocycle(M, fam);
  out.report.merge(check_representation(out.rep, tol), "representation/");
  return out;
}

struct AlgebraMap {
  std::vector<int> image;  // basis element -> arrow
  Report report;
};

// f_a delta_a |-> the function on the arrows of a with value f_a(r(g)).
inline AlgebraMap canonical_iso_cstar(const CrossedProductAlgebra& A, const std::vector<std::vector<int>>& chart,
                                      const MeasuredGroupoid& M, double tol = kCanonTol) {
  const auto& S = A.S;
  const auto& G = M.G;
  AlgebraMap out;
  bool welldef = true;
  out.image.assign(static_cast<std::size_t>(A.dim()), -1);
  for (int a = 0; a < S.size(); ++a)
    for (int y : S.range_domain(a)) {
      const int g = chart[a][S.theta[S.inv[a]].map[y]];
      const int i = A.cls(a, y);
      if (out.image[i] >= 0 && out.image[i] != g) welldef = false;
      out.image[i] = g;
    }
  out.report.add("well-defined", welldef);
  std::vector<int> hit(static_cast<std::size_t>(G.arrows()), 0);
  for (int g : out.image)
    if (g >= 0) ++hit[g];
  const std::string dims = "crossed product " + std::to_string(A.dim()) + ", convolution algebra " + std::to_string(G.arrows());
  out.report.add("dimensions", A.dim() == G.arrows(), 0.0, dims);
  out.report.add("surjective", std::all_of(hit.begin(), hit.end(), [](int c) { return c >= 1; }));
  out.report.add("injective", std::all_of(hit.begin(), hit.end(), [](int c) { return c <= 1; }) &&
                                  std::find(out.image.begin(), out.image.end(), -1) == out.image.end());
  if (!out.report.ok()) return out;
  double md = 0.0, sd = 0.0;
  for (int i = 0; i < A.dim(); ++i) {
    for (int j = 0; j < A.dim(); ++j) {
      ConvElement expect(static_cast<std::size_t>(G.arrows()), 0.0);
      if (A.mul(i, j) >= 0) expect[out.image[A.mul(i, j)]] = 1.0;
      const ConvElement got = convolve(M, delta(G, out.image[i]), delta(G, out.image[j]));
      for (int g = 0; g < G.arrows(); ++g) md = std::max(md, std::abs(got[g] - expect[g]));
    }
    const ConvElement s = star(G, delta(G, out.image[i]));
    const ConvElement e = delta(G, out.image[A.star[i]]);
    for (int g = 0; g < G.arrows(); ++g) sd = std::max(sd, std::abs(s[g] - e[g]));
  }
  out.report.bound("multiplicative", md, tol);
  out.report.bound("star", sd, tol);
  return out;
}

// Orbit sizes and isotropy orders: C*(G) is the sum of M_k(C*(H)) over orbits.
inline std::vector<std::pair<int, int>> matrix_block_pattern(const FiniteGroupoid& G) {
  const auto orbit = orbit_labels(G);
  std::map<int, std::pair<int, int>> blocks;
  for (int x = 0; x < G.objects(); ++x) {
    auto& b = blocks[orbit[x]];
    ++b.first;
    if (b.second == 0)
      for (int g = 0; g < G.arrows(); ++g) b.second += G.src[g] == x && G.rng[g] == x;
  }
  std::vector<std::pair<int, int>> out;
  for (auto& [o, b] : blocks) out.push_back(b);
  return out;
}

// If G is transitive with trivial isotropy, the map g |-> (r g, s g) onto the pair groupoid.
inline bool matches_pair_groupoid(const FiniteGroupoid& G) {
  const int n = G.objects();
  if (G.arrows() != n * n) return false;
  const FiniteGroupoid P = pair_groupoid(n);
  std::vector<int> to(static_cast<std::size_t>(G.arrows()));
  std::vector<int> hit(static_cast<std::size_t>(n * n), 0);
  for (int g = 0; g < G.arrows(); ++g) {
    to[g] = G.rng[g] * n + G.src[g];
    if (hit[to[g]]++) return false;
  }
  for (int g = 0; g < G.arrows(); ++g)
    for (int h = 0; h < G.arrows(); ++h)
      if (G.compose(g, h) >= 0 && to[G.compose(g, h)] != P.compose(to[g], to[h])) return false;
  return true;
}

struct TransformationResult {
  MeasuredGroupoid T;
  int crossed_dim = 0;
  Report report;
};

// Gamma |x C(X) with basis 1_y delta_gamma, against C*(Gamma |x X) through (gamma, x) |-> (gamma, gamma x).
inline TransformationResult transformation_theorem(const FiniteGroup& H, const GroupAction& A,
                                                   const Representation* rep = nullptr, double tol = kTol) {
  PresetParams p;
  p.group = H;
  p.action = A;
  TransformationResult out;
  out.T = measured("transformation", build_preset(PresetKind::transformation, p));
  const auto& G = out.T.G;
  const int np = static_cast<int>(A.points.size()), ng = H.order();
  const int d = ng * np;
  out.crossed_dim = d;
  auto idx = [np](int gamma, int y) { return gamma * np + y; };
  // (1_y delta_g)(1_z delta_h) = [y = g z] 1_y delta_gh ; (1_y delta_g)* = 1_{g^-1 y} delta_{g^-1}
  std::vector<int> prod(static_cast<std::size_t>(d) * d, -1), st(static_cast<std::size_t>(d));
  for (int g = 0; g < ng; ++g)
    for (int y = 0; y < np; ++y) {
      st[idx(g, y)] = idx(H.inverse(g), A.act[H.inverse(g)][y]);
      for (int h = 0; h < ng; ++h)
        for (int z = 0; z < np; ++z)
          if (y == A.act[g][z]) prod[static_cast<std::size_t>(idx(g, y)) * d + idx(h, z)] = idx(H.mul(g, h), y);
    }
  // arrow (gamma, x) has index gamma * np + x in the transformation groupoid
  std::vector<int> iota(static_cast<std::size_t>(d));
  for (int g = 0; g < ng; ++g)
    for (int x = 0; x < np; ++x) iota[g * np + x] = idx(g, A.act[g][x]);
  std::vector<int> hit(static_cast<std::size_t>(d), 0);
  for (int v : iota) ++hit[v];
  out.report.add("dimensions", G.arrows() == d, 0.0,
                 "crossed product " + std::to_string(d) + ", convolution algebra " + std::to_string(G.arrows()));
  out.report.add("bijective", std::all_of(hit.begin(), hit.end(), [](int c) { return c == 1; }));
  double md = 0.0, sd = 0.0;
  for (int a = 0; a < G.arrows(); ++a) {
    for (int b = 0; b < G.arrows(); ++b) {
      const ConvElement c = convolve(out.T, delta(G, a), delta(G, b));
      const int expect = prod[static_cast<std::size_t>(iota[a]) * d + iota[b]];
      for (int k = 0; k < G.arrows(); ++k) {
        const cx want = (expect >= 0 && iota[k] == expect) ? cx(1.0) : cx(0.0);
        md = std::max(md, std::abs(c[k] - want));
      }
    }
    const ConvElement s = star(G, delta(G, a));
    for (int k = 0; k < G.arrows(); ++k) sd = std::max(sd, std::abs(s[k] - (iota[k] == st[iota[a]] ? 1.0 : 0.0)));
  }
  out.report.bound("multiplicative", md, kCanonTol);
  out.report.bound("star", sd, kCanonTol);

  if (rep != nullptr) {
    // W_gamma = sum_x U_(gamma,x) : H_x -> H_{gamma x}; its integrated form is 1_y delta_g |-> phi(1_y) W_g.
    const auto fam = blockwise(*rep);
    const auto& Hm = rep->module;
    std::vector<Mat> W(static_cast<std::size_t>(ng), Mat::Zero(Hm.dim(), Hm.dim()));
    for (int g = 0; g < ng; ++g)
      for (int x = 0; x < np; ++x) W[g] += embed(Hm, G.rng[g * np + x], x, fam.U[g * np + x]);
    auto n = [&](const Mat& m) { return ModuleMap{Hm, Hm, m}.normalized(); };
    double gd = 0.0, cd = 0.0, ud = 0.0, id = 0.0, bd = 0.0;
    for (int g = 0; g < ng; ++g) {
      ud = std::max(ud, max_abs(n(W[g]).adjoint() * n(W[g]) - Mat::Identity(Hm.dim(), Hm.dim())));
      for (int h = 0; h < ng; ++h) gd = std::max(gd, max_abs(n(W[g] * W[h] - W[H.mul(g, h)])));
      for (int x = 0; x < np; ++x)
        cd = std::max(cd, max_abs(n(W[g] * projection(Hm, {x}) * W[g].adjoint() - projection(Hm, {A.act[g][x]}))));
    }
    const ConvRep L = integrate_rep(*rep);
    for (int a = 0; a < G.arrows(); ++a) {
      const auto [g, y] = std::pair{iota[a] / np, iota[a] % np};
      id = std::max(id, max_abs(n(L.ops[a] - projection(Hm, {y}) * W[g])));
    }
    // Back to the groupoid: U_(gamma,x) is W_gamma restricted to H_x.
    CocycleFamily back{Hm, {}};
    for (int g = 0; g < ng; ++g)
      for (int x = 0; x < np; ++x) {
        const auto rows = fibre_indices(Hm, A.act[g][x]), cols = fibre_indices(Hm, x);
        Mat blk(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
          for (std::size_t j = 0; j < cols.size(); ++j) blk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = W[g](rows[i], cols[j]);
        back.U.push_back(blk);
      }
    bd = max_abs(from_cocycle(rep->base, back).U.normalized() - rep->U.normalized());
    out.report.bound("group-rep/unitary", ud, tol);
    out.report.bound("group-rep/homomorphism", gd, tol);
    out.report.bound("group-rep/covariance", cd, tol);
    out.report.bound("integrated-forms-agree", id, tol);
    out.report.bound("translation-round-trip", bd, tol);
  }
  return out;
}

}  // namespace gcstar

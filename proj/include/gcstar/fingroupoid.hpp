#pragma once

#include "gcstar/random.hpp"

#include <array>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcstar {

// Out-of-range indices or inconsistent table sizes; distinct from axiom violations.
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Violation {
  std::string axiom;
  std::string witness;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  void add(std::string axiom, std::string witness) {
    violations.push_back({std::move(axiom), std::move(witness)});
  }
};

struct FiniteGroupoid {
  std::vector<std::string> object_names;
  std::vector<std::string> arrow_names;
  std::vector<int> src, rng, inv, unit;
  std::vector<int> comp;  // arrows() * arrows(), -1 where undefined

  int objects() const { return static_cast<int>(object_names.size()); }
  int arrows() const { return static_cast<int>(arrow_names.size()); }
  int compose(int g, int h) const { return comp[static_cast<std::size_t>(g) * arrow_names.size() + h]; }
  int& compose_ref(int g, int h) { return comp[static_cast<std::size_t>(g) * arrow_names.size() + h]; }
  bool composable(int g, int h) const { return src[g] == rng[h]; }

  int object_index(const std::string& n) const {
    for (int i = 0; i < objects(); ++i)
      if (object_names[i] == n) return i;
    return -1;
  }
  int arrow_index(const std::string& n) const {
    for (int i = 0; i < arrows(); ++i)
      if (arrow_names[i] == n) return i;
    return -1;
  }

  // Arrows with r(g) = x, resp. s(g) = x, in index order.
  std::vector<int> range_fibre(int x) const {
    std::vector<int> out;
    for (int g = 0; g < arrows(); ++g)
      if (rng[g] == x) out.push_back(g);
    return out;
  }
  std::vector<int> source_fibre(int x) const {
    std::vector<int> out;
    for (int g = 0; g < arrows(); ++g)
      if (src[g] == x) out.push_back(g);
    return out;
  }

  bool is_space() const {
    for (int g = 0; g < arrows(); ++g)
      if (src[g] != rng[g] || unit[src[g]] != g) return false;
    return arrows() == objects();
  }

  std::string tuple(std::initializer_list<int> gs) const {
    std::string s = "(";
    bool first = true;
    for (int g : gs) {
      if (!first) s += ",";
      first = false;
      s += (g >= 0 && g < arrows()) ? arrow_names[g] : std::string("undefined");
    }
    return s + ")";
  }
};

inline void check_structure(const FiniteGroupoid& G) {
  const int n0 = G.objects(), n1 = G.arrows();
  auto in = [](int v, int n) { return v >= 0 && v < n; };
  if (static_cast<int>(G.src.size()) != n1 || static_cast<int>(G.rng.size()) != n1 ||
      static_cast<int>(G.inv.size()) != n1 || static_cast<int>(G.unit.size()) != n0 ||
      G.comp.size() != static_cast<std::size_t>(n1) * n1)
    throw StructuralError("groupoid tables have inconsistent sizes");
  for (int g = 0; g < n1; ++g) {
    if (!in(G.src[g], n0) || !in(G.rng[g], n0)) throw StructuralError("arrow " + G.arrow_names[g] + ": object out of range");
    if (!in(G.inv[g], n1)) throw StructuralError("arrow " + G.arrow_names[g] + ": inverse out of range");
  }
  for (int x = 0; x < n0; ++x)
    if (!in(G.unit[x], n1)) throw StructuralError("object " + G.object_names[x] + ": unit out of range");
  for (int v : G.comp)
    if (v != -1 && !in(v, n1)) throw StructuralError("composition table entry out of range");
  std::set<std::string> seen(G.arrow_names.begin(), G.arrow_names.end());
  if (static_cast<int>(seen.size()) != n1) throw StructuralError("duplicate arrow identifiers");
  std::set<std::string> seen0(G.object_names.begin(), G.object_names.end());
  if (static_cast<int>(seen0.size()) != n0) throw StructuralError("duplicate object identifiers");
}

inline ValidationReport validate_groupoid(const FiniteGroupoid& G) {
  check_structure(G);
  ValidationReport rep;
  const int n0 = G.objects(), n1 = G.arrows();
  for (int g = 0; g < n1; ++g) {
    for (int h = 0; h < n1; ++h) {
      const int gh = G.compose(g, h);
      const bool ok = G.composable(g, h);
      if (ok != (gh >= 0)) {
        rep.add(ok ? "composition-defined" : "composition-undefined", G.tuple({g, h}));
        continue;
      }
      if (gh < 0) continue;
      if (G.rng[gh] != G.rng[g]) rep.add("range-of-composite", G.tuple({g, h}));
      if (G.src[gh] != G.src[h]) rep.add("source-of-composite", G.tuple({g, h}));
    }
  }
  for (int g = 0; g < n1; ++g)
    for (int h = 0; h < n1; ++h) {
      const int gh = G.compose(g, h);
      if (gh < 0) continue;
      for (int k = 0; k < n1; ++k) {
        const int hk = G.compose(h, k);
        if (hk < 0) continue;
        const int l = G.compose(gh, k), r = G.compose(g, hk);
        if (l != r) rep.add("associativity", G.tuple({g, h, k}));
      }
    }
  for (int x = 0; x < n0; ++x) {
    const int e = G.unit[x];
    if (G.src[e] != x || G.rng[e] != x) rep.add("unit-endpoints", G.object_names[x]);
  }
  for (int g = 0; g < n1; ++g) {
    if (G.compose(g, G.unit[G.src[g]]) != g) rep.add("right-unit", G.tuple({g}));
    if (G.compose(G.unit[G.rng[g]], g) != g) rep.add("left-unit", G.tuple({g}));
    const int gi = G.inv[g];
    if (G.compose(g, gi) != G.unit[G.rng[g]]) rep.add("right-inverse", G.tuple({g, gi}));
    if (G.compose(gi, g) != G.unit[G.src[g]]) rep.add("left-inverse", G.tuple({gi, g}));
    if (G.inv[gi] != g) rep.add("involutive-inverse", G.tuple({g}));
  }
  return rep;
}

// Haar system stored as one positive weight per arrow.
struct HaarSystem {
  std::vector<double> weight;

  static HaarSystem from_c(const FiniteGroupoid& G, const std::vector<double>& c) {
    HaarSystem h;
    h.weight.resize(static_cast<std::size_t>(G.arrows()));
    for (int g = 0; g < G.arrows(); ++g) h.weight[g] = c[G.src[g]];
    return h;
  }
  static HaarSystem counting(const FiniteGroupoid& G) {
    return from_c(G, std::vector<double>(static_cast<std::size_t>(G.objects()), 1.0));
  }
};

inline ValidationReport validate_haar(const FiniteGroupoid& G, const HaarSystem& h) {
  ValidationReport rep;
  if (static_cast<int>(h.weight.size()) != G.arrows()) {
    rep.add("weight-total", "weight table has " + std::to_string(h.weight.size()) + " entries");
    return rep;
  }
  for (int g = 0; g < G.arrows(); ++g)
    if (!(h.weight[g] > 0.0)) rep.add("positivity", G.tuple({g}));
  for (int g = 0; g < G.arrows(); ++g)
    for (int k = 0; k < G.arrows(); ++k) {
      const int gk = G.compose(g, k);
      if (gk >= 0 && h.weight[gk] != h.weight[k]) rep.add("left-invariance", G.tuple({g, k}));
    }
  return rep;
}

// A groupoid with a validated Haar system; alpha(g) = c(s g), alpha_tilde(g) = c(r g).
struct MeasuredGroupoid {
  std::string name;
  FiniteGroupoid G;
  HaarSystem haar;

  double c(int x) const { return haar.weight[G.unit[x]]; }
  double alpha(int g) const { return haar.weight[g]; }
  double alpha_tilde(int g) const { return haar.weight[G.inv[g]]; }
  bool counting() const {
    for (double w : haar.weight)
      if (w != 1.0) return false;
    return true;
  }
};

inline MeasuredGroupoid measured(std::string name, FiniteGroupoid G, std::vector<double> c = {}) {
  if (c.empty()) c.assign(static_cast<std::size_t>(G.objects()), 1.0);
  if (static_cast<int>(c.size()) != G.objects()) throw StructuralError("Haar parameter count differs from object count");
  MeasuredGroupoid m{std::move(name), std::move(G), {}};
  m.haar = HaarSystem::from_c(m.G, c);
  return m;
}

struct Nerve {
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::array<int, 3>> triples;
  std::vector<int> d0, d1, d2, v0, v1, v2;
  std::vector<int> index;  // g * |G1| + h -> position in pairs, or -1
  int arrows = 0;

  int size() const { return static_cast<int>(pairs.size()); }
  int find(int g, int h) const { return index[static_cast<std::size_t>(g) * arrows + h]; }
};

inline Nerve nerve(const FiniteGroupoid& G) {
  if (!validate_groupoid(G).ok()) throw std::invalid_argument("nerve: not a groupoid");
  Nerve N;
  const int n1 = G.arrows();
  N.arrows = n1;
  N.index.assign(static_cast<std::size_t>(n1) * n1, -1);
  for (int g = 0; g < n1; ++g)
    for (int h = 0; h < n1; ++h)
      if (G.composable(g, h)) {
        N.index[static_cast<std::size_t>(g) * n1 + h] = N.size();
        N.pairs.emplace_back(g, h);
        N.d0.push_back(h);
        N.d1.push_back(G.compose(g, h));
        N.d2.push_back(g);
        N.v0.push_back(G.rng[g]);
        N.v1.push_back(G.src[g]);
        N.v2.push_back(G.src[h]);
      }
  for (auto [g, h] : N.pairs)
    for (int k = 0; k < n1; ++k)
      if (G.composable(h, k)) N.triples.push_back({g, h, k});
  for (int i = 0; i < N.size(); ++i) {
    const bool ok = N.v0[i] == G.rng[N.d1[i]] && N.v0[i] == G.rng[N.d2[i]] && N.v1[i] == G.rng[N.d0[i]] &&
                    N.v1[i] == G.src[N.d2[i]] && N.v2[i] == G.src[N.d0[i]] && N.v2[i] == G.src[N.d1[i]];
    if (!ok) throw std::logic_error("nerve: vertex identities fail");
  }
  return N;
}

// ---------------------------------------------------------------------------
// Groups, actions and presets

struct FiniteGroup {
  std::vector<std::string> names;
  std::vector<int> table;  // row-major product

  int order() const { return static_cast<int>(names.size()); }
  int mul(int a, int b) const { return table[static_cast<std::size_t>(a) * names.size() + b]; }
  int identity() const {
    for (int e = 0; e < order(); ++e) {
      bool ok = true;
      for (int a = 0; a < order() && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
      if (ok) return e;
    }
    return -1;
  }
  int inverse(int a) const {
    const int e = identity();
    for (int b = 0; b < order(); ++b)
      if (mul(a, b) == e) return b;
    return -1;
  }

  static FiniteGroup cyclic(int n) {
    FiniteGroup G;
    for (int i = 0; i < n; ++i) G.names.push_back(n == 2 ? (i == 0 ? "e" : "g") : std::to_string(i));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) G.table.push_back((a + b) % n);
    return G;
  }
};

inline ValidationReport validate_group(const FiniteGroup& G) {
  ValidationReport rep;
  const int n = G.order();
  if (n == 0) {
    rep.add("nonempty", "no elements");
    return rep;
  }
  if (G.table.size() != static_cast<std::size_t>(n) * n) {
    rep.add("table-shape", std::to_string(G.table.size()) + " entries");
    return rep;
  }
  for (int v : G.table)
    if (v < 0 || v >= n) {
      rep.add("closure", std::to_string(v));
      return rep;
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c)))
          rep.add("associativity", "(" + G.names[a] + "," + G.names[b] + "," + G.names[c] + ")");
  const int e = G.identity();
  if (e < 0) {
    rep.add("identity", "no two-sided identity");
    return rep;
  }
  for (int a = 0; a < n; ++a)
    if (G.inverse(a) < 0 || G.mul(G.inverse(a), a) != e) rep.add("inverse", G.names[a]);
  return rep;
}

struct GroupAction {
  std::vector<std::string> points;
  std::vector<std::vector<int>> act;  // act[gamma][x] = gamma . x
};

inline ValidationReport validate_action(const FiniteGroup& G, const GroupAction& A) {
  ValidationReport rep;
  const int n = static_cast<int>(A.points.size());
  if (static_cast<int>(A.act.size()) != G.order()) {
    rep.add("action-shape", "one row per group element expected");
    return rep;
  }
  for (int a = 0; a < G.order(); ++a) {
    if (static_cast<int>(A.act[a].size()) != n) {
      rep.add("action-shape", G.names[a]);
      return rep;
    }
    for (int v : A.act[a])
      if (v < 0 || v >= n) {
        rep.add("action-range", G.names[a]);
        return rep;
      }
  }
  const int e = G.identity();
  for (int x = 0; x < n; ++x)
    if (A.act[e][x] != x) rep.add("identity-acts-trivially", A.points[x]);
  for (int a = 0; a < G.order(); ++a)
    for (int b = 0; b < G.order(); ++b)
      for (int x = 0; x < n; ++x)
        if (A.act[G.mul(a, b)][x] != A.act[a][A.act[b][x]])
          rep.add("compatibility", "(" + G.names[a] + "," + G.names[b] + "," + A.points[x] + ")");
  return rep;
}

inline GroupAction rotation_action(const FiniteGroup& cyclic_group, int n_points) {
  GroupAction A;
  for (int x = 0; x < n_points; ++x) A.points.push_back(std::to_string(x + 1));
  for (int a = 0; a < cyclic_group.order(); ++a) {
    std::vector<int> row;
    for (int x = 0; x < n_points; ++x) row.push_back((x + a) % n_points);
    A.act.push_back(row);
  }
  return A;
}

inline GroupAction trivial_action(const FiniteGroup& G, int n_points) {
  GroupAction A;
  for (int x = 0; x < n_points; ++x) A.points.push_back(std::to_string(x + 1));
  std::vector<int> id(static_cast<std::size_t>(n_points));
  std::iota(id.begin(), id.end(), 0);
  A.act.assign(static_cast<std::size_t>(G.order()), id);
  return A;
}

namespace detail {

template <class Mul>
FiniteGroupoid assemble(std::vector<std::string> objs, std::vector<std::string> arrs, std::vector<int> src,
                        std::vector<int> rng, Mul mul) {
  FiniteGroupoid G;
  G.object_names = std::move(objs);
  G.arrow_names = std::move(arrs);
  G.src = std::move(src);
  G.rng = std::move(rng);
  const int n1 = G.arrows();
  G.comp.assign(static_cast<std::size_t>(n1) * n1, -1);
  for (int g = 0; g < n1; ++g)
    for (int h = 0; h < n1; ++h)
      if (G.src[g] == G.rng[h]) G.compose_ref(g, h) = mul(g, h);
  G.unit.assign(static_cast<std::size_t>(G.objects()), -1);
  for (int g = 0; g < n1; ++g)
    if (G.src[g] == G.rng[g] && G.compose(g, g) == g) G.unit[G.src[g]] = g;
  G.inv.assign(static_cast<std::size_t>(n1), -1);
  for (int g = 0; g < n1; ++g)
    for (int h = 0; h < n1; ++h)
      if (G.src[g] == G.rng[h] && G.compose(g, h) == G.unit[G.rng[g]] && G.src[h] == G.rng[g]) G.inv[g] = h;
  return G;
}

}  // namespace detail

inline FiniteGroupoid group_groupoid(const FiniteGroup& H) {
  if (auto r = validate_group(H); !r.ok())
    throw std::invalid_argument("group table rejected: " + r.violations[0].axiom + " " + r.violations[0].witness);
  const int n = H.order();
  return detail::assemble({"*"}, H.names, std::vector<int>(static_cast<std::size_t>(n), 0),
                          std::vector<int>(static_cast<std::size_t>(n), 0),
                          [&](int a, int b) { return H.mul(a, b); });
}

inline FiniteGroupoid space_groupoid(int n) {
  std::vector<std::string> objs;
  for (int i = 0; i < n; ++i) objs.push_back(std::to_string(i + 1));
  std::vector<int> id(static_cast<std::size_t>(n));
  std::iota(id.begin(), id.end(), 0);
  return detail::assemble(objs, objs, id, id, [](int a, int) { return a; });
}

// Arrow (i,j) goes from j to i; (i,j)(j,k) = (i,k).
inline FiniteGroupoid pair_groupoid(int n) {
  std::vector<std::string> objs, arrs;
  std::vector<int> src, rng;
  for (int i = 0; i < n; ++i) objs.push_back(std::to_string(i + 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      arrs.push_back("(" + objs[i] + "," + objs[j] + ")");
      rng.push_back(i);
      src.push_back(j);
    }
  return detail::assemble(objs, arrs, src, rng, [n](int a, int b) { return (a / n) * n + (b % n); });
}

// Arrows (gamma, x) with s = x and r = gamma.x.
inline FiniteGroupoid transformation_groupoid(const FiniteGroup& H, const GroupAction& A) {
  if (auto r = validate_group(H); !r.ok())
    throw std::invalid_argument("group table rejected: " + r.violations[0].axiom + " " + r.violations[0].witness);
  if (auto r = validate_action(H, A); !r.ok())
    throw std::invalid_argument("not a group action: " + r.violations[0].axiom + " " + r.violations[0].witness);
  const int np = static_cast<int>(A.points.size());
  std::vector<std::string> arrs;
  std::vector<int> src, rng;
  for (int a = 0; a < H.order(); ++a)
    for (int x = 0; x < np; ++x) {
      arrs.push_back("(" + H.names[a] + "," + A.points[x] + ")");
      src.push_back(x);
      rng.push_back(A.act[a][x]);
    }
  return detail::assemble(A.points, arrs, src, rng, [&](int g, int h) {
    const int a = g / np, b = h / np, x = h % np;
    return H.mul(a, b) * np + x;
  });
}

inline FiniteGroupoid disjoint_union(const std::vector<FiniteGroupoid>& parts) {
  std::vector<std::string> objs, arrs;
  std::vector<int> src, rng, owner, local;
  std::vector<int> obj_off, arr_off;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& P = parts[p];
    obj_off.push_back(static_cast<int>(objs.size()));
    arr_off.push_back(static_cast<int>(arrs.size()));
    const std::string tag = std::to_string(p) + "/";
    for (const auto& o : P.object_names) objs.push_back(tag + o);
    for (int g = 0; g < P.arrows(); ++g) {
      arrs.push_back(tag + P.arrow_names[g]);
      src.push_back(obj_off[p] + P.src[g]);
      rng.push_back(obj_off[p] + P.rng[g]);
      owner.push_back(static_cast<int>(p));
      local.push_back(g);
    }
  }
  return detail::assemble(objs, arrs, src, rng, [&](int g, int h) {
    const auto p = static_cast<std::size_t>(owner[g]);
    return arr_off[p] + parts[p].compose(local[g], local[h]);
  });
}

// Product groupoid; arrows (g,h) with componentwise structure.
inline FiniteGroupoid product(const FiniteGroupoid& A, const FiniteGroupoid& B) {
  std::vector<std::string> objs, arrs;
  std::vector<int> src, rng;
  const int nb0 = B.objects(), nb1 = B.arrows();
  for (int x = 0; x < A.objects(); ++x)
    for (int y = 0; y < nb0; ++y) objs.push_back(A.object_names[x] + "." + B.object_names[y]);
  for (int g = 0; g < A.arrows(); ++g)
    for (int h = 0; h < nb1; ++h) {
      arrs.push_back(A.arrow_names[g] + "." + B.arrow_names[h]);
      src.push_back(A.src[g] * nb0 + B.src[h]);
      rng.push_back(A.rng[g] * nb0 + B.rng[h]);
    }
  return detail::assemble(objs, arrs, src, rng, [&](int p, int q) {
    return A.compose(p / nb1, q / nb1) * nb1 + B.compose(p % nb1, q % nb1);
  });
}

enum class PresetKind { group, space, pair, transformation, disjoint_union };

struct PresetParams {
  FiniteGroup group;
  GroupAction action;
  int n = 0;
  std::vector<FiniteGroupoid> parts;
};

inline FiniteGroupoid build_preset(PresetKind kind, const PresetParams& p) {
  FiniteGroupoid G;
  switch (kind) {
    case PresetKind::group: G = group_groupoid(p.group); break;
    case PresetKind::space: G = space_groupoid(p.n); break;
    case PresetKind::pair: G = pair_groupoid(p.n); break;
    case PresetKind::transformation: G = transformation_groupoid(p.group, p.action); break;
    case PresetKind::disjoint_union: G = disjoint_union(p.parts); break;
  }
  if (auto r = validate_groupoid(G); !r.ok())
    throw std::logic_error("preset failed validation: " + r.violations[0].axiom);
  return G;
}

inline FiniteGroup swap_group() { return FiniteGroup::cyclic(2); }

inline GroupAction swap_action() {
  GroupAction A;
  A.points = {"1", "2"};
  A.act = {{0, 1}, {1, 0}};
  return A;
}

inline std::vector<std::string> fixture_names() { return {"Z2", "P2", "X2", "T2", "W2"}; }

inline MeasuredGroupoid fixture(const std::string& name) {
  if (name == "Z2") return measured(name, group_groupoid(FiniteGroup::cyclic(2)));
  if (name == "P2") return measured(name, pair_groupoid(2));
  if (name == "X2") return measured(name, space_groupoid(2));
  if (name == "T2") return measured(name, transformation_groupoid(swap_group(), swap_action()));
  if (name == "W2") return measured(name, pair_groupoid(2), {1.0, 4.0});
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

inline std::vector<MeasuredGroupoid> fixtures() {
  std::vector<MeasuredGroupoid> out;
  for (const auto& n : fixture_names()) out.push_back(fixture(n));
  return out;
}

// Disjoint union of components (pair groupoid on k objects) x (cyclic group of order m).
inline FiniteGroupoid random_groupoid(Rng& rng, int max_objects = 4, int max_arrows = 12) {
  std::vector<FiniteGroupoid> parts;
  int objects = 0, arrows = 0;
  const int target = rng.between(1, max_objects);
  while (objects < target) {
    const int room_obj = target - objects;
    int k = rng.between(1, room_obj);
    while (k > 1 && k * k > max_arrows - arrows - (target - objects - k)) --k;
    const int room = max_arrows - arrows - (target - objects - k);
    int m = rng.between(1, std::max(1, std::min(4, room / (k * k))));
    if (k * k * m > room) m = 1;
    FiniteGroupoid comp = pair_groupoid(k);
    if (m > 1) comp = product(comp, group_groupoid(FiniteGroup::cyclic(m)));
    parts.push_back(comp);
    objects += k;
    arrows += k * k * m;
  }
  return parts.size() == 1 ? parts[0] : disjoint_union(parts);
}

inline MeasuredGroupoid random_measured(Rng& rng, bool weighted, const std::string& name = "random") {
  FiniteGroupoid G = random_groupoid(rng);
  std::vector<double> c(static_cast<std::size_t>(G.objects()), 1.0);
  if (weighted)
    for (auto& v : c) v = std::round(rng.uniform(0.25, 4.0) * 64.0) / 64.0;
  return measured(name, std::move(G), c);
}

// A copy with one table entry perturbed so that some axiom must fail.
inline FiniteGroupoid mutate(const FiniteGroupoid& G, Rng& rng) {
  FiniteGroupoid M = G;
  const int n1 = G.arrows();
  for (;;) {
    const int kind = rng.below(n1 > 1 ? 4 : 2);
    const int g = rng.below(n1), h = rng.below(n1);
    if (kind == 0) {
      M.compose_ref(g, h) = M.compose(g, h) >= 0 ? -1 : g;
      return M;
    }
    if (kind == 1) {
      M.src[g] = (M.src[g] + 1) % std::max(1, G.objects());
      if (G.objects() > 1) return M;
      M = G;
      M.compose_ref(g, G.unit[G.src[g]]) = -1;
      return M;
    }
    if (kind == 2 && G.compose(g, h) >= 0) {
      M.compose_ref(g, h) = (G.compose(g, h) + 1 + rng.below(n1 - 1)) % n1;
      return M;
    }
    if (kind == 3 && G.inv[g] != g) {
      M.inv[g] = g;
      return M;
    }
  }
}

}  // namespace gcstar

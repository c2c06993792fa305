#pragma once

#include "gcstar/fingroupoid.hpp"
#include "gcstar/report.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcstar {

struct FiniteMap {
  int dom = 0;
  int cod = 0;
  std::vector<int> f;

  int operator()(int x) const { return f[x]; }
  static FiniteMap identity(int n) {
    FiniteMap m{n, n, std::vector<int>(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i) m.f[i] = i;
    return m;
  }
};

inline FiniteMap compose_maps(const FiniteMap& g, const FiniteMap& f) {
  if (f.cod != g.dom) throw std::invalid_argument("compose_maps: domain mismatch");
  FiniteMap h{f.dom, g.cod, std::vector<int>(static_cast<std::size_t>(f.dom))};
  for (int x = 0; x < f.dom; ++x) h.f[x] = g.f[f.f[x]];
  return h;
}

// One nonnegative weight per point of the total space; the fibre measure over y
// is the restriction to the preimage of y.
struct MeasureFamily {
  FiniteMap along;
  std::vector<double> weight;

  bool full_support() const {
    for (double w : weight)
      if (!(w > 0.0)) return false;
    return true;
  }
};

inline std::vector<cx> integrate(const MeasureFamily& lambda, const std::vector<cx>& phi) {
  if (static_cast<int>(phi.size()) != lambda.along.dom) throw std::invalid_argument("integrate: function not total");
  std::vector<cx> out(static_cast<std::size_t>(lambda.along.cod), 0.0);
  for (int x = 0; x < lambda.along.dom; ++x) out[lambda.along.f[x]] += phi[x] * lambda.weight[x];
  return out;
}

// mu o lambda along g o f.
inline MeasureFamily compose_families(const MeasureFamily& lambda, const MeasureFamily& mu) {
  if (lambda.along.cod != mu.along.dom) throw std::invalid_argument("compose_families: domain mismatch");
  MeasureFamily out{compose_maps(mu.along, lambda.along), std::vector<double>(lambda.weight.size())};
  for (int x = 0; x < lambda.along.dom; ++x) out.weight[x] = lambda.weight[x] * mu.weight[lambda.along.f[x]];
  return out;
}

// Span Z <- X -> Y with a family along the forward leg.
struct TopologicalCorrespondence {
  int z_size = 0;
  std::vector<int> backward;
  MeasureFamily family;

  int space() const { return family.along.dom; }
  int y_size() const { return family.along.cod; }
  int forward(int x) const { return family.along.f[x]; }
};

inline TopologicalCorrespondence make_correspondence(int z_size, std::vector<int> backward, MeasureFamily fam) {
  if (static_cast<int>(backward.size()) != fam.along.dom)
    throw std::invalid_argument("correspondence: backward map not total");
  return {z_size, std::move(backward), std::move(fam)};
}

// Correspondence (X, id, f, lambda) from C(X) to C(Y).
inline TopologicalCorrespondence as_correspondence(const MeasureFamily& fam) {
  return make_correspondence(fam.along.dom, FiniteMap::identity(fam.along.dom).f, fam);
}

struct FibreProduct {
  TopologicalCorrespondence corr;
  std::vector<std::pair<int, int>> points;  // (v, w) in enumeration order
};

inline FibreProduct fibre_product(const TopologicalCorrespondence& V, const TopologicalCorrespondence& W) {
  if (V.y_size() != W.z_size) throw std::invalid_argument("fibre_product: mismatched middle space");
  FibreProduct fp;
  std::vector<int> b, f;
  std::vector<double> w;
  for (int v = 0; v < V.space(); ++v)
    for (int x = 0; x < W.space(); ++x)
      if (V.forward(v) == W.backward[x]) {
        fp.points.emplace_back(v, x);
        b.push_back(V.backward[v]);
        f.push_back(W.forward(x));
        w.push_back(V.family.weight[v] * W.family.weight[x]);
      }
  const int n = static_cast<int>(fp.points.size());
  fp.corr = make_correspondence(V.z_size, b, MeasureFamily{FiniteMap{n, W.y_size(), f}, w});
  return fp;
}

// Verifies f2 o Phi = f1, b2 o Phi = b1 and lambda2 = delta * Phi_*(lambda1).
inline Report check_corr_isomorphism(const TopologicalCorrespondence& C1, const TopologicalCorrespondence& C2,
                                     const std::vector<int>& phi, const std::vector<double>& delta,
                                     double tol = kCanonTol) {
  Report rep;
  const int n = C1.space();
  bool bij = static_cast<int>(phi.size()) == n && C2.space() == n &&
             static_cast<int>(delta.size()) == C2.space();
  std::vector<int> hit(static_cast<std::size_t>(std::max(0, C2.space())), 0);
  if (bij)
    for (int x = 0; x < n; ++x) {
      if (phi[x] < 0 || phi[x] >= n || hit[phi[x]]++) {
        bij = false;
        break;
      }
    }
  rep.add("bijection", bij);
  if (!bij) return rep;
  std::string wf, wb, wm;
  double defect = 0.0;
  for (int x = 0; x < n; ++x) {
    if (wf.empty() && C2.forward(phi[x]) != C1.forward(x)) wf = std::to_string(x);
    if (wb.empty() && C2.backward[phi[x]] != C1.backward[x]) wb = std::to_string(x);
    const double lhs = C2.family.weight[phi[x]];
    const double rhs = delta[phi[x]] * C1.family.weight[x];
    const double d = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
    if (d > defect) {
      defect = d;
      if (d > tol) wm = std::to_string(x);
    }
  }
  rep.add("forward-compatible", wf.empty(), 0.0, wf);
  rep.add("backward-compatible", wb.empty(), 0.0, wb);
  rep.bound("measure-transport", defect, tol, wm);
  if (C1.family.full_support() && C2.family.full_support()) {
    double ud = 0.0;
    for (int x = 0; x < n; ++x) {
      const double forced = C2.family.weight[phi[x]] / C1.family.weight[x];
      ud = std::max(ud, std::abs(forced - delta[phi[x]]) / std::max(1.0, forced));
    }
    rep.bound("density-unique", ud, tol);
  }
  return rep;
}

// The families of a measured groupoid: alpha along r, alpha~ along s,
// lambda_i along d_i : G2 -> G1 and mu_i along v_i : G2 -> G0.
struct GroupoidFamilies {
  Nerve nerve;
  MeasureFamily alpha, alpha_tilde;
  MeasureFamily lambda[3];
  MeasureFamily mu[3];
};

inline GroupoidFamilies groupoid_families(const MeasuredGroupoid& M) {
  if (auto r = validate_haar(M.G, M.haar); !r.ok())
    throw std::invalid_argument("invalid Haar system: " + r.violations[0].axiom + " at " + r.violations[0].witness);
  const auto& G = M.G;
  GroupoidFamilies F;
  F.nerve = nerve(G);
  const int n0 = G.objects(), n1 = G.arrows(), n2 = F.nerve.size();
  F.alpha.along = FiniteMap{n1, n0, G.rng};
  F.alpha_tilde.along = FiniteMap{n1, n0, G.src};
  for (int g = 0; g < n1; ++g) {
    F.alpha.weight.push_back(M.alpha(g));
    F.alpha_tilde.weight.push_back(M.alpha_tilde(g));
  }
  const auto& N = F.nerve;
  F.lambda[0].along = FiniteMap{n2, n1, N.d0};
  F.lambda[1].along = FiniteMap{n2, n1, N.d1};
  F.lambda[2].along = FiniteMap{n2, n1, N.d2};
  for (int i = 0; i < n2; ++i) {
    const auto [g, h] = N.pairs[i];
    F.lambda[0].weight.push_back(M.c(G.rng[g]));
    F.lambda[1].weight.push_back(M.c(G.src[g]));
    F.lambda[2].weight.push_back(M.c(G.src[h]));
  }
  F.mu[0] = compose_families(F.lambda[1], F.alpha);
  F.mu[1] = compose_families(F.lambda[0], F.alpha);
  F.mu[2] = compose_families(F.lambda[0], F.alpha_tilde);
  return F;
}

inline bool same_family(const MeasureFamily& a, const MeasureFamily& b) {
  return a.along.dom == b.along.dom && a.along.cod == b.along.cod && a.along.f == b.along.f && a.weight == b.weight;
}

// The three coincidences mu0 = alpha.lambda1 = alpha.lambda2, etc., as exact tables.
inline Report check_family_identities(const GroupoidFamilies& F) {
  Report rep;
  rep.add("mu0", same_family(compose_families(F.lambda[1], F.alpha), F.mu[0]) &&
                     same_family(compose_families(F.lambda[2], F.alpha), F.mu[0]));
  rep.add("mu1", same_family(compose_families(F.lambda[0], F.alpha), F.mu[1]) &&
                     same_family(compose_families(F.lambda[2], F.alpha_tilde), F.mu[1]));
  rep.add("mu2", same_family(compose_families(F.lambda[0], F.alpha_tilde), F.mu[2]) &&
                     same_family(compose_families(F.lambda[1], F.alpha_tilde), F.mu[2]));
  return rep;
}

// Both sides of the iterated-integral comparison for f on {(g,h) : s(g)=r(h)},
// indexed by the nerve; returns (lhs, rhs) as functions of x = s(h).
inline std::pair<std::vector<cx>, std::vector<cx>> compare_integrals(const MeasuredGroupoid& M, const Nerve& N,
                                                                     const std::vector<cx>& f) {
  const auto& G = M.G;
  std::vector<cx> lhs(static_cast<std::size_t>(G.objects()), 0.0), rhs = lhs;
  for (int k = 0; k < G.arrows(); ++k)
    for (int g = 0; g < G.arrows(); ++g) {
      if (G.rng[g] != G.rng[k]) continue;
      const int h = G.compose(G.inv[g], k);
      lhs[G.src[k]] += f[N.find(g, h)] * M.alpha(g) * M.alpha_tilde(k);
    }
  for (int h = 0; h < G.arrows(); ++h)
    for (int g = 0; g < G.arrows(); ++g) {
      if (G.src[g] != G.rng[h]) continue;
      rhs[G.src[h]] += f[N.find(g, h)] * M.alpha_tilde(g) * M.alpha_tilde(h);
    }
  return {lhs, rhs};
}

}  // namespace gcstar

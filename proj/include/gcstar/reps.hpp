#pragma once

#include "gcstar/convalg.hpp"
#include "gcstar/hilbmod.hpp"
#include "gcstar/measures.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcstar {

// (G1, id, s, alpha~) and (G1, id, r, alpha) as correspondences C(G1) -> C(G0).
inline TopologicalCorrespondence source_corr(const MeasuredGroupoid& M) {
  std::vector<double> w;
  for (int g = 0; g < M.G.arrows(); ++g) w.push_back(M.alpha_tilde(g));
  return as_correspondence(MeasureFamily{FiniteMap{M.G.arrows(), M.G.objects(), M.G.src}, w});
}

inline TopologicalCorrespondence range_corr(const MeasuredGroupoid& M) {
  std::vector<double> w;
  for (int g = 0; g < M.G.arrows(); ++g) w.push_back(M.alpha(g));
  return as_correspondence(MeasureFamily{FiniteMap{M.G.arrows(), M.G.objects(), M.G.rng}, w});
}

inline Correspondence source_space(const MeasuredGroupoid& M, const Correspondence& H) {
  return tensor(l2(source_corr(M)), H);
}

inline Correspondence target_space(const MeasuredGroupoid& M, const Correspondence& H) {
  return tensor(l2(range_corr(M)), H);
}

// The module is the grading phi: H_{x,w} = span of basis vectors with left x and right w.
struct Representation {
  MeasuredGroupoid base;
  Correspondence module;
  ModuleMap U;

  int coefficients() const { return module.y_size; }
};

inline std::vector<int> fibre_indices(const Correspondence& H, int x) {
  std::vector<int> out;
  for (int i = 0; i < H.dim(); ++i)
    if (H.left[i] == x) out.push_back(i);
  return out;
}

// U_g : H_{s(g)} -> H_{r(g)} for every arrow, in module coordinates.
struct CocycleFamily {
  Correspondence module;
  std::vector<Mat> U;
};

inline Mat embed(const Correspondence& H, int rx, int sx, const Mat& block) {
  const auto rows = fibre_indices(H, rx), cols = fibre_indices(H, sx);
  Mat m = Mat::Zero(H.dim(), H.dim());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m(rows[i], cols[j]) = block(i, j);
  return m;
}

inline CocycleFamily blockwise(const Representation& rep) {
  const auto& M = rep.base;
  const auto& H = rep.module;
  const Correspondence Ls = l2(source_corr(M)), Lr = l2(range_corr(M));
  const auto s_at = detail::pair_lookup(rep.U.source, Ls.dim(), H.dim());
  const auto r_at = detail::pair_lookup(rep.U.target, Lr.dim(), H.dim());
  CocycleFamily fam{H, {}};
  for (int g = 0; g < M.G.arrows(); ++g) {
    const auto rows = fibre_indices(H, M.G.rng[g]), cols = fibre_indices(H, M.G.src[g]);
    Mat V = Mat::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const int r = r_at[static_cast<std::size_t>(g) * H.dim() + rows[i]];
        const int c = s_at[static_cast<std::size_t>(g) * H.dim() + cols[j]];
        if (r >= 0 && c >= 0) V(i, j) = rep.U.matrix(r, c);
      }
    fam.U.push_back(std::sqrt(M.alpha(g) / M.alpha_tilde(g)) * V);
  }
  return fam;
}

inline Representation from_cocycle(const MeasuredGroupoid& M, const CocycleFamily& fam) {
  const auto& H = fam.module;
  if (H.z_size != M.G.objects()) throw std::invalid_argument("from_cocycle: module not graded over the objects");
  if (static_cast<int>(fam.U.size()) != M.G.arrows()) throw std::invalid_argument("from_cocycle: one unitary per arrow expected");
  const Correspondence Ls = l2(source_corr(M)), Lr = l2(range_corr(M));
  Correspondence S = tensor(Ls, H), T = tensor(Lr, H);
  const auto s_at = detail::pair_lookup(S, Ls.dim(), H.dim());
  const auto r_at = detail::pair_lookup(T, Lr.dim(), H.dim());
  Mat U = Mat::Zero(T.dim(), S.dim());
  for (int g = 0; g < M.G.arrows(); ++g) {
    const auto rows = fibre_indices(H, M.G.rng[g]), cols = fibre_indices(H, M.G.src[g]);
    const Mat& Ug = fam.U[g];
    if (Ug.rows() != static_cast<Eigen::Index>(rows.size()) || Ug.cols() != static_cast<Eigen::Index>(cols.size()))
      throw std::invalid_argument("from_cocycle: unitary for arrow " + M.G.arrow_names[g] + " has wrong shape");
    const double scale = std::sqrt(M.alpha_tilde(g) / M.alpha(g));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j)
        U(r_at[static_cast<std::size_t>(g) * H.dim() + rows[i]], s_at[static_cast<std::size_t>(g) * H.dim() + cols[j]]) =
            scale * Ug(i, j);
  }
  return {M, H, {S, T, U}};
}

// Unitarity, w-preservation and multiplicativity of a cocycle family.
inline Report check_cocycle(const MeasuredGroupoid& M, const CocycleFamily& fam, double tol = kTol) {
  Report rep;
  const auto& G = M.G;
  const auto& H = fam.module;
  double ud = 0.0, wd = 0.0, md = 0.0, ed = 0.0;
  std::string mw;
  std::vector<Mat> full;
  for (int g = 0; g < G.arrows(); ++g) {
    const Mat E = embed(H, G.rng[g], G.src[g], fam.U[g]);
    full.push_back(E);
    const ModuleMap m{H, H, E};
    const Mat n = m.normalized();
    const auto cols = fibre_indices(H, G.src[g]);
    Mat p = Mat::Zero(H.dim(), H.dim());
    for (int c : cols) p(c, c) = 1.0;
    ud = std::max(ud, max_abs(n.adjoint() * n - p));
    wd = std::max(wd, right_linearity_defect(m));
  }
  for (int x = 0; x < G.objects(); ++x) {
    Mat p = Mat::Zero(H.dim(), H.dim());
    for (int c : fibre_indices(H, x)) p(c, c) = 1.0;
    ed = std::max(ed, max_abs(full[G.unit[x]] - p));
  }
  for (int g = 0; g < G.arrows(); ++g)
    for (int h = 0; h < G.arrows(); ++h) {
      const int gh = G.compose(g, h);
      if (gh < 0) continue;
      const double d = max_abs(full[g] * full[h] - full[gh]);
      if (d > md) {
        md = d;
        mw = G.tuple({g, h});
      }
    }
  rep.bound("cocycle-unitary", ud, tol);
  rep.bound("cocycle-coefficients", wd, tol);
  rep.bound("cocycle-units", ed, tol);
  rep.bound("cocycle-multiplicative", md, tol, md > tol ? mw : std::string{});
  return rep;
}

// d_i^*(U) : L2(G2, v_a, mu_a) (x) H -> L2(G2, v_b, mu_b) (x) H, built by tensoring U with the
// identity on L2(G2, d_i, lambda_i) and conjugating with the canonical isomorphisms.
inline ModuleMap pullback(const Representation& rep, const GroupoidFamilies& F, int i) {
  const auto& M = rep.base;
  const auto& H = rep.module;
  const TopologicalCorrespondence Pi = as_correspondence(F.lambda[i]);
  const Correspondence P = l2(Pi);
  const Correspondence Ls = l2(source_corr(M)), Lr = l2(range_corr(M));
  const ModuleMap idU = tensor_id_left(P, rep.U);
  const ModuleMap gs = tensor_id_right(gamma_compose(Pi, F.alpha_tilde), H);
  const ModuleMap gr = tensor_id_right(gamma_compose(Pi, F.alpha), H);
  const ModuleMap in = compose(gs, associator(P, Ls, H));
  const ModuleMap out = compose(gr, associator(P, Lr, H));
  return compose(out, compose(idU, adjoint(in)));
}

inline Report check_representation(const Representation& rep, double tol = kTol) {
  Report out;
  const auto& M = rep.base;
  const bool shapes = same_shape(rep.U.source, source_space(M, rep.module)) &&
                      same_shape(rep.U.target, target_space(M, rep.module)) &&
                      rep.module.z_size == M.G.objects();
  out.add("shape", shapes);
  if (!shapes) return out;
  out.bound("unitary", unitarity_defect(rep.U), tol);
  out.bound("right-linear", right_linearity_defect(rep.U), tol);
  out.bound("intertwines-C(G1)", intertwining_defect(rep.U), tol);
  const GroupoidFamilies F = groupoid_families(M);
  const ModuleMap d0 = pullback(rep, F, 0), d1 = pullback(rep, F, 1), d2 = pullback(rep, F, 2);
  const bool chain = same_shape(d0.target, d2.source) && same_shape(d0.source, d1.source) &&
                     same_shape(d2.target, d1.target);
  out.add("face-shapes", chain);
  if (!chain) return out;
  const Mat lhs = compose(d2, d0).normalized(), rhs = d1.normalized();
  double d = max_abs(lhs - rhs);
  std::string witness;
  if (d > tol) {
    Eigen::Index r, c;
    (lhs - rhs).cwiseAbs().maxCoeff(&r, &c);
    const auto [g, h] = F.nerve.pairs[d1.source.factors[c].first];
    witness = M.G.tuple({g, h});
  }
  out.bound("cocycle", d, tol, witness);
  return out;
}

// G0 <-r- G1 -s-> G0 with alpha~ along s.
inline TopologicalCorrespondence regular_corr(const MeasuredGroupoid& M) {
  const auto& G = M.G;
  std::vector<double> w;
  for (int h = 0; h < G.arrows(); ++h) w.push_back(M.alpha_tilde(h));
  return make_correspondence(G.objects(), G.rng, MeasureFamily{FiniteMap{G.arrows(), G.objects(), G.src}, w});
}

// The left regular representation on r*L2(G1, s, alpha~) with U induced by (g,h) -> (g, gh).
inline Representation regular_representation(const MeasuredGroupoid& M) {
  const auto& G = M.G;
  const TopologicalCorrespondence S = source_corr(M), R = range_corr(M);
  const TopologicalCorrespondence Reg = regular_corr(M);
  const FibreProduct fs = fibre_product(S, Reg), fr = fibre_product(R, Reg);
  std::map<std::pair<int, int>, int> where;
  for (std::size_t p = 0; p < fr.points.size(); ++p) where[fr.points[p]] = static_cast<int>(p);
  std::vector<int> phi;
  for (auto [g, h] : fs.points) phi.push_back(where.at({g, G.compose(g, h)}));
  std::vector<double> delta(fr.points.size());
  for (std::size_t p = 0; p < fs.points.size(); ++p)
    delta[phi[p]] = fr.corr.family.weight[phi[p]] / fs.corr.family.weight[p];
  if (!check_corr_isomorphism(fs.corr, fr.corr, phi, delta).ok())
    throw std::logic_error("regular_representation: (g,h) -> (g,gh) is not an isomorphism");
  const ModuleMap upsilon = induced_unitary(fs.corr, fr.corr, phi, delta);
  const ModuleMap U = compose(adjoint(gamma_fibre(R, Reg)), compose(upsilon, gamma_fibre(S, Reg)));
  return {M, l2(Reg), U};
}

struct SupportReport {
  std::vector<std::vector<bool>> support;  // [w][x]
  Report report;
};

inline SupportReport invariant_support(const Representation& rep) {
  SupportReport out;
  const auto& G = rep.base.G;
  const auto& H = rep.module;
  out.support.assign(static_cast<std::size_t>(H.y_size), std::vector<bool>(static_cast<std::size_t>(G.objects()), false));
  for (int i = 0; i < H.dim(); ++i) out.support[H.right[i]][H.left[i]] = true;
  std::string witness;
  for (int w = 0; w < H.y_size && witness.empty(); ++w)
    for (int g = 0; g < G.arrows(); ++g)
      if (out.support[w][G.src[g]] != out.support[w][G.rng[g]]) {
        witness = G.tuple({g});
        break;
      }
  out.report.add("support-invariant", witness.empty(), 0.0, witness);
  return out;
}

// Induction along a correspondence E from C(W) to C(W'): module H (x) E, U' = U (x) id_E.
inline Representation induce(const Representation& rep, const Correspondence& E) {
  if (E.z_size != rep.module.y_size) throw std::invalid_argument("induce: algebra mismatch");
  const auto& M = rep.base;
  const Correspondence HE = tensor(rep.module, E);
  const Correspondence Ls = l2(source_corr(M)), Lr = l2(range_corr(M));
  const ModuleMap UE = tensor_id_right(rep.U, E);
  const ModuleMap as = associator(Ls, rep.module, E), ar = associator(Lr, rep.module, E);
  const ModuleMap U = compose(adjoint(ar), compose(UE, as));
  return {M, HE, U};
}

struct IntertwinerCheck {
  bool isometry = false;
  bool intertwines = false;
  double grading_defect = 0.0;
  double defect = 0.0;
  explicit operator bool() const { return isometry && intertwines; }
};

// V : module1 -> module2 intertwines iff it respects the grading and (id (x) V) U1 = U2 (id (x) V).
inline IntertwinerCheck check_intertwiner(const ModuleMap& V, const Representation& rep1, const Representation& rep2,
                                         double tol = kTol) {
  IntertwinerCheck out;
  const auto& M = rep1.base;
  out.isometry = isometry_defect(V) <= tol && right_linearity_defect(V) <= tol;
  out.grading_defect = intertwining_defect(V);
  const Correspondence Ls = l2(source_corr(M)), Lr = l2(range_corr(M));
  const ModuleMap vs = tensor_id_left(Ls, V), vr = tensor_id_left(Lr, V);
  const Mat lhs = compose(vr, rep1.U).normalized(), rhs = compose(rep2.U, vs).normalized();
  out.defect = max_abs(lhs - rhs);
  out.intertwines = out.grading_defect <= tol && out.defect <= tol;
  return out;
}

inline std::vector<int> orbit_labels(const FiniteGroupoid& G) {
  std::vector<int> lab(static_cast<std::size_t>(G.objects()), -1);
  int next = 0;
  for (int x = 0; x < G.objects(); ++x) {
    if (lab[x] >= 0) continue;
    lab[x] = next;
    for (int g = 0; g < G.arrows(); ++g)
      if (G.src[g] == x) lab[G.rng[g]] = next;
    ++next;
  }
  return lab;
}

struct CocycleOptions {
  int coefficients = 1;   // |W|
  int max_dim = 3;
  bool weighted_module = false;
};

// Random cocycle: per orbit a base point, Haar-random transports along a spanning tree,
// and a random unitary representation of the isotropy group at the base point
// (sum of characters for cyclic isotropy, trivial otherwise).
inline CocycleFamily random_cocycle(const MeasuredGroupoid& M, Rng& rng, const CocycleOptions& opt = {}) {
  const auto& G = M.G;
  const auto orbit = orbit_labels(G);
  const int n_orbits = orbit.empty() ? 0 : *std::max_element(orbit.begin(), orbit.end()) + 1;
  std::vector<int> base(static_cast<std::size_t>(n_orbits), -1);
  for (int x = 0; x < G.objects(); ++x)
    if (base[orbit[x]] < 0) base[orbit[x]] = x;
  std::vector<std::vector<int>> dim(static_cast<std::size_t>(n_orbits), std::vector<int>(static_cast<std::size_t>(opt.coefficients)));
  int total = 0;
  for (auto& row : dim)
    for (auto& d : row) total += (d = rng.between(0, opt.max_dim));
  if (total == 0) dim[0][0] = 1;

  Correspondence H;
  H.z_size = G.objects();
  H.y_size = opt.coefficients;
  for (int w = 0; w < opt.coefficients; ++w)
    for (int x = 0; x < G.objects(); ++x)
      for (int k = 0; k < dim[orbit[x]][w]; ++k)
        H.push(x, w, opt.weighted_module ? std::round(rng.uniform(0.5, 3.0) * 16.0) / 16.0 : 1.0);

  // Orthonormal-coordinate cocycle first, then conjugated into the weighted basis.
  auto block_dim = [&](int x) { return static_cast<Eigen::Index>(fibre_indices(H, x).size()); };
  std::vector<int> tree(static_cast<std::size_t>(G.objects()), -1);
  for (int g = 0; g < G.arrows(); ++g)
    if (G.src[g] == base[orbit[G.rng[g]]] && tree[G.rng[g]] < 0) tree[G.rng[g]] = g;
  auto w_blocks = [&](int x, auto&& gen) {
    const auto idx = fibre_indices(H, x);
    Mat m = Mat::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    Eigen::Index off = 0;
    for (int w = 0; w < opt.coefficients; ++w) {
      const Eigen::Index d = dim[orbit[x]][w];
      m.block(off, off, d, d) = gen(d);
      off += d;
    }
    return m;
  };
  std::vector<Mat> T(static_cast<std::size_t>(G.objects()));
  for (int x = 0; x < G.objects(); ++x)
    T[x] = x == base[orbit[x]] ? Mat(Mat::Identity(block_dim(x), block_dim(x)))
                               : w_blocks(x, [&](Eigen::Index d) { return haar_unitary(rng, d); });
  std::vector<Mat> pi(static_cast<std::size_t>(G.arrows()));
  for (int o = 0; o < n_orbits; ++o) {
    const int x0 = base[o];
    std::vector<int> iso;
    for (int g = 0; g < G.arrows(); ++g)
      if (G.src[g] == x0 && G.rng[g] == x0) iso.push_back(g);
    int gen = -1;
    std::vector<int> power(static_cast<std::size_t>(G.arrows()), -1);
    for (int k : iso) {
      std::vector<int> pw(static_cast<std::size_t>(G.arrows()), -1);
      int cur = G.unit[x0], n = 0;
      do {
        pw[cur] = n++;
        cur = G.compose(k, cur);
      } while (cur != G.unit[x0]);
      if (n == static_cast<int>(iso.size())) {
        gen = k;
        power = pw;
        break;
      }
    }
    const int m = static_cast<int>(iso.size());
    const Mat chars = w_blocks(x0, [&](Eigen::Index d) {
      Mat c = Mat::Zero(d, d);
      for (Eigen::Index i = 0; i < d; ++i) c(i, i) = static_cast<double>(gen >= 0 ? rng.below(m) : 0);
      return c;
    });
    const Mat W = w_blocks(x0, [&](Eigen::Index d) { return haar_unitary(rng, d); });
    for (int k : iso) {
      Mat D = Mat::Zero(chars.rows(), chars.cols());
      for (Eigen::Index i = 0; i < D.rows(); ++i) {
        const double t = chars(i, i).real() * (gen >= 0 ? power[k] : 0);
        D(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * t / m);
      }
      pi[k] = W * D * W.adjoint();
    }
  }
  CocycleFamily fam{H, {}};
  for (int g = 0; g < G.arrows(); ++g) {
    const int x = G.src[g], y = G.rng[g];
    const int ty = tree[y], tx = tree[x];
    const int core = G.compose(G.inv[ty], G.compose(g, tx));
    Mat on = T[y] * pi[core] * T[x].adjoint();
    // Unitary in the weighted inner product: D_y^{-1/2} on D_x^{1/2}.
    const auto ri = fibre_indices(H, y), ci = fibre_indices(H, x);
    for (std::size_t i = 0; i < ri.size(); ++i) on.row(static_cast<Eigen::Index>(i)) /= std::sqrt(H.weight[ri[i]]);
    for (std::size_t j = 0; j < ci.size(); ++j) on.col(static_cast<Eigen::Index>(j)) *= std::sqrt(H.weight[ci[j]]);
    fam.U.push_back(on);
  }
  return fam;
}

inline Representation random_representation(const MeasuredGroupoid& M, Rng& rng, const CocycleOptions& opt = {}) {
  return from_cocycle(M, random_cocycle(M, rng, opt));
}

}  // namespace gcstar

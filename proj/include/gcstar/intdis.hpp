#pragma once

#include "gcstar/convalg.hpp"
#include "gcstar/reps.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcstar {

// A representation of the convolution algebra, stored through the images of the point masses.
struct ConvRep {
  Correspondence space;
  std::vector<Mat> ops;  // L(delta_g), module coordinates

  Mat operator()(const ConvElement& f) const {
    Mat m = Mat::Zero(space.dim(), space.dim());
    for (std::size_t g = 0; g < ops.size(); ++g)
      if (f[g] != cx(0.0)) m += f[g] * ops[g];
    return m;
  }
  ModuleMap map(const ConvElement& f) const { return {space, space, (*this)(f)}; }
};

// L(conj(f1) f2) = T_{f1}^* U T_{f2}.
inline Mat integrated_operator(const Representation& rep, const ConvElement& f1, const ConvElement& f2) {
  const auto& M = rep.base;
  const Correspondence Ls = l2(source_corr(M)), Lr = l2(range_corr(M));
  Vec x1(Lr.dim()), x2(Ls.dim());
  for (int k = 0; k < Lr.dim(); ++k) x1(k) = f1[Lr.origin[k]];
  for (int k = 0; k < Ls.dim(); ++k) x2(k) = f2[Ls.origin[k]];
  const ModuleMap t2 = creation(Ls, x2, rep.module), t1 = creation(Lr, x1, rep.module);
  return compose(adjoint(t1), compose(rep.U, t2)).matrix;
}

// f2 = sqrt|f|, f1 = conj(f)/f2, and f1 = 0 where f = 0.
inline Mat integrated_operator(const Representation& rep, const ConvElement& f) {
  ConvElement f1(f.size()), f2(f.size());
  for (std::size_t g = 0; g < f.size(); ++g) {
    const double a = std::abs(f[g]);
    f2[g] = std::sqrt(a);
    f1[g] = a == 0.0 ? cx(0.0) : std::conj(f[g]) / f2[g];
  }
  return integrated_operator(rep, f1, f2);
}

inline ConvRep integrate_rep(const Representation& rep) {
  ConvRep L{rep.module, {}};
  for (int g = 0; g < rep.base.G.arrows(); ++g) L.ops.push_back(integrated_operator(rep, delta(rep.base.G, g)));
  return L;
}

// Independent path through the cocycle: L(delta_g) = sqrt(alpha(g) alpha~(g)) U_g.
inline ConvRep oracle_integrate(const Representation& rep) {
  const auto& M = rep.base;
  const CocycleFamily fam = blockwise(rep);
  ConvRep L{rep.module, {}};
  for (int g = 0; g < M.G.arrows(); ++g)
    L.ops.push_back(std::sqrt(M.alpha(g) * M.alpha_tilde(g)) * embed(rep.module, M.G.rng[g], M.G.src[g], fam.U[g]));
  return L;
}

inline double operator_defect(const ConvRep& a, const ConvRep& b) {
  double d = 0.0;
  for (std::size_t g = 0; g < a.ops.size(); ++g)
    d = std::max(d, max_abs(ModuleMap{a.space, a.space, a.ops[g] - b.ops[g]}.normalized()));
  return d;
}

inline Report check_conv_rep(const ConvRep& L, const MeasuredGroupoid& M, const std::vector<ConvElement>& probes = {},
                             double tol = kTol) {
  Report rep;
  const auto& G = M.G;
  const int n1 = G.arrows();
  double md = 0.0, sd = 0.0, wd = 0.0;
  std::string mw, sw;
  for (int g = 0; g < n1; ++g)
    for (int h = 0; h < n1; ++h) {
      const Mat prod = L.ops[g] * L.ops[h];
      const Mat conv = L(convolve(M, delta(G, g), delta(G, h)));
      const double d = max_abs(ModuleMap{L.space, L.space, prod - conv}.normalized());
      if (d > md) {
        md = d;
        mw = G.tuple({g, h});
      }
    }
  for (int g = 0; g < n1; ++g) {
    const double d = max_abs(adjoint(L.map(delta(G, g))).normalized() - L.map(star(G, delta(G, g))).normalized());
    if (d > sd) {
      sd = d;
      sw = G.tuple({g});
    }
    wd = std::max(wd, right_linearity_defect(L.map(delta(G, g))));
  }
  rep.bound("multiplicative", md, tol, md > tol ? mw : std::string{});
  rep.bound("star", sd, tol, sd > tol ? sw : std::string{});
  rep.bound("right-linear", wd, tol);
  Mat stacked(L.space.dim(), static_cast<Eigen::Index>(n1) * L.space.dim());
  for (int g = 0; g < n1; ++g)
    stacked.middleCols(static_cast<Eigen::Index>(g) * L.space.dim(), L.space.dim()) = L.map(delta(G, g)).normalized();
  const auto rank = numerical_rank(stacked);
  rep.add("nondegenerate", rank == L.space.dim(), static_cast<double>(L.space.dim() - rank),
          rank == L.space.dim() ? std::string{} : "rank " + std::to_string(rank) + " of " + std::to_string(L.space.dim()));
  std::vector<ConvElement> fs = probes;
  for (int g = 0; g < n1; ++g) fs.push_back(delta(G, g));
  double b1 = -1e300, b2 = -1e300;
  for (const auto& f : fs) {
    const double norm = operator_norm(L.map(f));
    const double bound = integrated_bound(M, f), inorm = i_norm(M, f);
    b1 = std::max(b1, norm - bound);
    b2 = std::max(b2, bound - inorm);
  }
  rep.bound("norm-bound", std::max(0.0, b1), tol);
  rep.bound("i-norm-bound", std::max(0.0, b2), tol);
  rep.add("continuity", true, 0.0, "vacuous (finite)");
  return rep;
}

// Seed space F0 with iota : F0 -> H and L0(delta_g) : F0 -> H.
struct PreRepresentation {
  Correspondence carrier;
  Correspondence seed;
  Mat iota;
  std::vector<Mat> ops;
};

inline PreRepresentation as_prerep(const ConvRep& L) {
  return {L.space, L.space, Mat::Identity(L.space.dim(), L.space.dim()), L.ops};
}

inline Mat prerep_apply(const PreRepresentation& P, const ConvElement& f) {
  Mat m = Mat::Zero(P.carrier.dim(), P.seed.dim());
  for (std::size_t g = 0; g < P.ops.size(); ++g)
    if (f[g] != cx(0.0)) m += f[g] * P.ops[g];
  return m;
}

// <L0(f1) xi, L0(f2) eta> = <iota xi, L0(f1^* * f2) eta> on point masses.
inline Report check_prerep(const PreRepresentation& P, const MeasuredGroupoid& M, double tol = kTol) {
  Report rep;
  const auto& G = M.G;
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(P.carrier.weight.data(), P.carrier.dim());
  const auto W = w.cast<cx>().asDiagonal();
  double d = 0.0;
  std::string wit;
  for (int g = 0; g < G.arrows(); ++g)
    for (int h = 0; h < G.arrows(); ++h) {
      const Mat lhs = P.ops[g].adjoint() * W * P.ops[h];
      const Mat rhs = P.iota.adjoint() * W * prerep_apply(P, convolve(M, star(G, delta(G, g)), delta(G, h)));
      const double e = max_abs(lhs - rhs) / std::max(1.0, max_abs(lhs));
      if (e > d) {
        d = e;
        wit = G.tuple({g, h});
      }
    }
  rep.bound("positive-type", d, tol, d > tol ? wit : std::string{});
  Mat stacked(P.carrier.dim(), static_cast<Eigen::Index>(G.arrows()) * P.seed.dim());
  for (int g = 0; g < G.arrows(); ++g)
    stacked.middleCols(static_cast<Eigen::Index>(g) * P.seed.dim(), P.seed.dim()) = P.ops[g];
  const auto rank = numerical_rank(stacked);
  rep.add("dense", rank == P.carrier.dim(), static_cast<double>(P.carrier.dim() - rank));
  rep.add("continuity", true, 0.0, "vacuous (finite)");
  return rep;
}

struct DisintegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Disintegration {
  Representation rep;
  Mat identification;  // rep.module coordinates -> carrier coordinates
  Report report;
};

inline Disintegration disintegrate(const PreRepresentation& P, const MeasuredGroupoid& M, double tol = kTol) {
  const auto& G = M.G;
  const int n0 = G.objects(), n1 = G.arrows();
  const Eigen::Index n = P.carrier.dim(), m = P.seed.dim();
  const Eigen::VectorXd dh = P.carrier.sqrt_weights(), df = P.seed.sqrt_weights();
  Disintegration out;
  std::vector<Mat> N(static_cast<std::size_t>(n1));
  for (int g = 0; g < n1; ++g)
    N[g] = dh.cast<cx>().asDiagonal() * P.ops[g] * df.cwiseInverse().cast<cx>().asDiagonal();

  // The spanning set {L0(delta_g) xi_b}.
  Mat K(n, static_cast<Eigen::Index>(n1) * m);
  for (int g = 0; g < n1; ++g) K.middleCols(static_cast<Eigen::Index>(g) * m, m) = N[g];
  const auto rank = numerical_rank(K);
  if (rank < n)
    throw DisintegrationError("spanning failure: L0(C_c)F0 has rank " + std::to_string(rank) + ", carrier has dimension " +
                              std::to_string(n) + " (gap " + std::to_string(n - rank) + ")");
  const double scale = std::max(1.0, max_abs(K));

  // phi(delta_x) L0(f) xi = L0(r^*(delta_x) f) xi.
  std::vector<Mat> Pr(static_cast<std::size_t>(n0));
  double resid = 0.0, proj = 0.0;
  Mat sum = Mat::Zero(n, n);
  for (int x = 0; x < n0; ++x) {
    Mat Kx = Mat::Zero(n, K.cols());
    for (int g = 0; g < n1; ++g)
      if (G.rng[g] == x) Kx.middleCols(static_cast<Eigen::Index>(g) * m, m) = N[g];
    Pr[x] = right_solve(K, Kx);
    resid = std::max(resid, max_abs(Pr[x] * K - Kx) / scale);
    proj = std::max(proj, std::max(max_abs(Pr[x] * Pr[x] - Pr[x]), max_abs(Pr[x].adjoint() - Pr[x])));
    sum += Pr[x];
  }
  if (resid > tol) throw DisintegrationError("grading solve residual " + std::to_string(resid) + " exceeds tolerance");
  out.report.bound("grading-residual", resid, tol);
  out.report.bound("grading-projections", std::max(proj, max_abs(sum - Mat::Identity(n, n))), tol);

  // Graded basis: keep the carrier basis when the projections are diagonal.
  bool diagonal = true;
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  for (Eigen::Index b = 0; b < n && diagonal; ++b)
    for (int x = 0; x < n0; ++x) {
      const double off = (Pr[x].col(b).cwiseAbs().sum() - std::abs(Pr[x](b, b)));
      const double d = std::abs(Pr[x](b, b));
      if (off > tol || (d > tol && std::abs(d - 1.0) > tol)) {
        diagonal = false;
        break;
      }
      if (d > 0.5) label[b] = x;
    }
  Correspondence H;
  H.z_size = n0;
  H.y_size = P.carrier.y_size;
  Mat Q;  // normalized carrier coordinates of the new basis
  if (diagonal) {
    for (Eigen::Index b = 0; b < n; ++b) H.push(label[b], P.carrier.right[b], P.carrier.weight[b]);
    Q = Mat::Identity(n, n);
    out.identification = Mat::Identity(n, n);
  } else {
    std::vector<Vec> cols;
    for (int w = 0; w < H.y_size; ++w) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index b = 0; b < n; ++b)
        if (P.carrier.right[b] == w) idx.push_back(b);
      for (int x = 0; x < n0; ++x) {
        Mat sub(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i)
          for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = Pr[x](idx[i], idx[j]);
        if (idx.empty()) continue;
        const HermitianEigen es = hermitian_eigen(sub);
        for (Eigen::Index k = 0; k < sub.rows(); ++k)
          if (es.values[static_cast<std::size_t>(k)] > 0.5) {
            Vec v = Vec::Zero(n);
            for (std::size_t i = 0; i < idx.size(); ++i) v(idx[i]) = es.vectors(static_cast<Eigen::Index>(i), k);
            cols.push_back(v);
            H.push(x, w, 1.0);
          }
      }
    }
    if (static_cast<Eigen::Index>(cols.size()) != n) throw DisintegrationError("grading projections do not decompose the carrier");
    Q.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) Q.col(k) = cols[k];
    out.identification = dh.cwiseInverse().cast<cx>().asDiagonal() * Q;
  }
  // Normalized operators in the new basis.
  for (auto& Ng : N) Ng = Q.adjoint() * Ng;

  const Correspondence Ls = l2(source_corr(M)), Lr = l2(range_corr(M));
  Correspondence S = tensor(Ls, H), T = tensor(Lr, H);
  const auto s_at = detail::pair_lookup(S, Ls.dim(), H.dim());
  const auto r_at = detail::pair_lookup(T, Lr.dim(), H.dim());
  Mat Un = Mat::Zero(T.dim(), S.dim());
  double gram = 0.0, fit = 0.0;
  for (int g = 0; g < n1; ++g) {
    const auto rows = fibre_indices(H, G.rng[g]), cols = fibre_indices(H, G.src[g]);
    std::vector<int> hs;
    for (int h = 0; h < n1; ++h)
      if (G.rng[h] == G.src[g]) hs.push_back(h);
    // tau_s(delta_(g,h) (x) xi) = delta_g (x) L0(delta_h) xi and tau_r(upsilon(.)) = delta_g (x) L0(delta_gh) xi.
    Mat A(static_cast<Eigen::Index>(cols.size()), static_cast<Eigen::Index>(hs.size()) * m);
    Mat B(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(hs.size()) * m);
    double leak = 0.0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const Mat& a = N[hs[k]];
      const Mat& b = N[G.compose(g, hs[k])];
      for (std::size_t i = 0; i < cols.size(); ++i) A.block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k) * m, 1, m) = a.row(cols[i]);
      for (std::size_t i = 0; i < rows.size(); ++i) B.block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k) * m, 1, m) = b.row(rows[i]);
      leak = std::max(leak, std::abs(a.squaredNorm() - A.middleCols(static_cast<Eigen::Index>(k) * m, m).squaredNorm()) /
                                std::max(1.0, a.squaredNorm()));
    }
    const Mat gs = M.alpha_tilde(g) * A.adjoint() * A, gr = M.alpha(g) * B.adjoint() * B;
    gram = std::max(gram, max_abs(gs - gr) / std::max(1.0, max_abs(gs)));
    const Mat X = right_solve(A, B);
    fit = std::max(fit, std::max(max_abs(X * A - B) / std::max(1.0, max_abs(B)), leak));
    const Mat blk = std::sqrt(M.alpha(g) / M.alpha_tilde(g)) * X;
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j)
        Un(r_at[static_cast<std::size_t>(g) * H.dim() + rows[i]], s_at[static_cast<std::size_t>(g) * H.dim() + cols[j]]) =
            blk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  if (gram > tol) throw DisintegrationError("tau_s and tau_r inner products differ by " + std::to_string(gram));
  out.report.bound("tau-inner-products", gram, tol);
  out.report.bound("tau-extension", fit, tol);
  out.rep = {M, H, {S, T, from_normalized(S, T, Un)}};
  return out;
}

inline Disintegration disintegrate(const ConvRep& L, const MeasuredGroupoid& M, double tol = kTol) {
  return disintegrate(as_prerep(L), M, tol);
}

// Transport a ConvRep on the disintegrated module back to the carrier.
inline ConvRep to_carrier(const ConvRep& L, const Disintegration& D, const Correspondence& carrier) {
  const Mat Jinv = D.identification.completeOrthogonalDecomposition().pseudoInverse();
  ConvRep out{carrier, {}};
  for (const auto& op : L.ops) out.ops.push_back(D.identification * op * Jinv);
  return out;
}

struct Extension {
  ConvRep rep;
  Report report;
};

// L' = integrate(disintegrate(P)), checked against L'(f) iota = L0(f) and L'(f) L0(f2) = L0(f * f2).
inline Extension extend_prerep(const PreRepresentation& P, const MeasuredGroupoid& M, double tol = kTol) {
  const Disintegration D = disintegrate(P, M, tol);
  Extension out{to_carrier(integrate_rep(D.rep), D, P.carrier), D.report};
  const auto& G = M.G;
  const Eigen::VectorXd dh = P.carrier.sqrt_weights();
  auto nrm = [&](const Mat& x) { return max_abs(dh.cast<cx>().asDiagonal() * x); };
  double d1 = 0.0, d2 = 0.0;
  for (int g = 0; g < G.arrows(); ++g) {
    d1 = std::max(d1, nrm(out.rep.ops[g] * P.iota - P.ops[g]));
    for (int h = 0; h < G.arrows(); ++h)
      d2 = std::max(d2, nrm(out.rep.ops[g] * P.ops[h] - prerep_apply(P, convolve(M, delta(G, g), delta(G, h)))));
  }
  out.report.bound("extends-seed", d1, tol);
  out.report.bound("extends-products", d2, tol);
  return out;
}

// <F1,F2>_s and <F1,F2>_r on G2 (indexed by the nerve), as functions on G1.
inline ConvElement pairing_s(const MeasuredGroupoid& M, const Nerve& N, const std::vector<cx>& F1,
                             const std::vector<cx>& F2) {
  const auto& G = M.G;
  ConvElement out(static_cast<std::size_t>(G.arrows()), 0.0);
  for (int k = 0; k < G.arrows(); ++k)
    for (int h = 0; h < G.arrows(); ++h) {
      if (G.src[h] != G.rng[k]) continue;
      const int hk = G.compose(h, k);
      for (int x = 0; x < G.arrows(); ++x) {
        if (G.src[x] != G.rng[h]) continue;
        out[k] += std::conj(F1[N.find(x, h)]) * F2[N.find(x, hk)] * M.alpha_tilde(x) * M.alpha_tilde(h);
      }
    }
  return out;
}

// Same pairing computed on G1 x_{r,r} G1 and pulled back along (x, y) -> (x, x^-1 y).
inline ConvElement pairing_r(const MeasuredGroupoid& M, const Nerve& N, const std::vector<cx>& F1,
                             const std::vector<cx>& F2) {
  const auto& G = M.G;
  ConvElement out(static_cast<std::size_t>(G.arrows()), 0.0);
  for (int k = 0; k < G.arrows(); ++k)
    for (int h = 0; h < G.arrows(); ++h) {
      if (G.src[h] != G.rng[k]) continue;
      const int hk = G.compose(h, k);
      for (int x = 0; x < G.arrows(); ++x) {
        if (G.rng[x] != G.rng[h]) continue;
        const int xi = G.inv[x];
        out[k] += std::conj(F1[N.find(x, G.compose(xi, h))]) * F2[N.find(x, G.compose(xi, hk))] * M.alpha(x) *
                  M.alpha_tilde(h);
      }
    }
  return out;
}

// disintegrate(integrate(rep)) = rep.
inline Report roundtrip(const Representation& rep, double tol = kTol) {
  Report out;
  const ConvRep L = integrate_rep(rep);
  Disintegration D;
  try {
    D = disintegrate(L, rep.base, tol);
  } catch (const std::exception& e) {
    out.add("disintegrate", false, 0.0, e.what());
    return out;
  }
  const bool same = D.rep.module.left == rep.module.left && D.rep.module.right == rep.module.right &&
                    max_abs(D.identification - Mat::Identity(D.identification.rows(), D.identification.cols())) == 0.0;
  out.add("grading", same);
  if (!same) return out;
  out.bound("U", max_abs(D.rep.U.normalized() - rep.U.normalized()), tol);
  out.add("representation", check_representation(D.rep, tol).ok());
  return out;
}

// integrate(disintegrate(L)) = L.
inline Report roundtrip(const ConvRep& L, const MeasuredGroupoid& M, double tol = kTol) {
  Report out;
  Disintegration D;
  try {
    D = disintegrate(L, M, tol);
  } catch (const std::exception& e) {
    out.add("disintegrate", false, 0.0, e.what());
    return out;
  }
  out.add("representation", check_representation(D.rep, tol).ok());
  const ConvRep back = to_carrier(integrate_rep(D.rep), D, L.space);
  out.bound("L", operator_defect(back, L), tol);
  return out;
}

}  // namespace gcstar

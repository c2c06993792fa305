#pragma once

#include "gcstar/crossed.hpp"
#include "gcstar/intdis.hpp"

#include <cstdint>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace gcstar {

// Random unitary on E that preserves every fibre E_{z,y}.
inline ModuleMap graded_unitary(Rng& rng, const Correspondence& E) {
  Mat n = Mat::Zero(E.dim(), E.dim());
  for (int z = 0; z < E.z_size; ++z)
    for (int y = 0; y < E.y_size; ++y) {
      std::vector<int> idx;
      for (int i = 0; i < E.dim(); ++i)
        if (E.left[i] == z && E.right[i] == y) idx.push_back(i);
      const Mat u = haar_unitary(rng, static_cast<Eigen::Index>(idx.size()));
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) n(idx[i], idx[j]) = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  return {E, E, from_normalized(E, E, n)};
}

// rep transported along a grading-preserving unitary W.
inline Representation conjugate(const Representation& rep, const ModuleMap& W) {
  const auto& M = rep.base;
  const Correspondence Ls = l2(source_corr(M)), Lr = l2(range_corr(M));
  const ModuleMap U = compose(tensor_id_left(Lr, W), compose(rep.U, adjoint(tensor_id_left(Ls, W))));
  return {M, W.target, U};
}

inline Representation direct_sum(const Representation& a, const Representation& b) {
  const auto fa = blockwise(a), fb = blockwise(b);
  CocycleFamily fam{direct_sum(a.module, b.module), {}};
  for (std::size_t g = 0; g < fa.U.size(); ++g) fam.U.push_back(block_diag(fa.U[g], fb.U[g]));
  return from_cocycle(a.base, fam);
}

// Correspondence from C(Z) to C(Y) with random fibre dimensions and weights.
inline Correspondence random_correspondence(Rng& rng, int z_size, int y_size) {
  Correspondence E;
  E.z_size = z_size;
  E.y_size = y_size;
  for (int y = 0; y < y_size; ++y)
    for (int z = 0; z < z_size; ++z) {
      const int d = rng.between(0, 2);
      for (int k = 0; k < d; ++k) E.push(z, y, std::round(rng.uniform(0.5, 2.0) * 16.0) / 16.0);
    }
  if (E.dim() == 0) E.push(0, 0, 1.0);
  return E;
}

// Forget the object grading and mix each coefficient block by a random unitary.
inline ConvRep scramble(const ConvRep& L, Rng& rng) {
  Correspondence C = L.space;
  C.z_size = 1;
  std::fill(C.left.begin(), C.left.end(), 0);
  const ModuleMap W = graded_unitary(rng, C);
  ConvRep out{C, {}};
  const ModuleMap Wi = adjoint(W);
  for (const auto& op : L.ops) out.ops.push_back(W.matrix * op * Wi.matrix);
  return out;
}

// Z2 on C^2 with U_g the coordinate swap.
inline Representation swap_cocycle_rep() {
  const MeasuredGroupoid M = fixture("Z2");
  CocycleFamily fam{graded_space({{2}}), {Mat::Identity(2, 2), Mat::Zero(2, 2)}};
  fam.U[1] << 0.0, 1.0, 1.0, 0.0;
  return from_cocycle(M, fam);
}

struct SuiteConfig {
  std::uint64_t seed = 7;
  int trials = 20;  // random instances where the battery draws a batch
  double tol = kTol;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  Report report;
  double seconds = 0.0;
};

namespace suite_detail {

inline Rng stream(const SuiteConfig& cfg, int id) { return Rng(cfg.seed * 0x100000001b3ULL + static_cast<std::uint64_t>(id)); }

inline std::vector<MeasuredGroupoid> weighted_randoms(Rng& rng, int n) {
  std::vector<MeasuredGroupoid> out;
  for (int i = 0; i < n; ++i) out.push_back(random_measured(rng, true, "random-" + std::to_string(i)));
  return out;
}

inline CocycleOptions options_for(int k) {
  CocycleOptions o;
  o.coefficients = 1 + k % 2;
  o.weighted_module = (k / 2) % 2 == 1;
  return o;
}

inline CriterionResult finish(int id, std::string title, Report r, std::string detail, const Stopwatch& sw) {
  CriterionResult c;
  c.id = id;
  c.title = std::move(title);
  c.pass = r.ok() && !r.checks.empty();
  c.detail = std::move(detail);
  c.report = std::move(r);
  c.seconds = sw.seconds();
  return c;
}

inline std::string worst(const Report& r) {
  double d = 0.0;
  for (const auto& c : r.checks) d = std::max(d, c.max_defect);
  std::ostringstream os;
  os << "max defect " << std::scientific << std::setprecision(1) << d;
  return os.str();
}

}  // namespace suite_detail

inline CriterionResult criterion_axioms(const SuiteConfig& cfg) {
  Stopwatch sw;
  Rng rng = suite_detail::stream(cfg, 1);
  Report r;
  int valid = 0, caught = 0;
  std::vector<MeasuredGroupoid> all = fixtures();
  for (auto& m : suite_detail::weighted_randoms(rng, 50)) all.push_back(m);
  for (const auto& M : all) {
    const bool ok = validate_groupoid(M.G).ok() && validate_haar(M.G, M.haar).ok();
    valid += ok;
    if (!ok) r.add("valid/" + M.name, false);
  }
  r.add("valid-instances", valid == static_cast<int>(all.size()), 0.0, std::to_string(valid) + "/" + std::to_string(all.size()));
  for (int k = 0; k < 20; ++k) {
    const auto& M = all[static_cast<std::size_t>(rng.below(static_cast<int>(all.size())))];
    const FiniteGroupoid bad = mutate(M.G, rng);
    bool flagged = false;
    try {
      const auto v = validate_groupoid(bad);
      flagged = !v.ok() && !v.violations[0].witness.empty();
    } catch (const StructuralError&) {
      flagged = true;
    }
    caught += flagged;
  }
  r.add("mutants-rejected", caught == 20, 0.0, std::to_string(caught) + "/20");
  return suite_detail::finish(1, "groupoid and Haar axioms", r,
                              std::to_string(valid) + " valid, " + std::to_string(caught) + "/20 mutants rejected with witness", sw);
}

inline CriterionResult criterion_measures(const SuiteConfig& cfg) {
  Stopwatch sw;
  Rng rng = suite_detail::stream(cfg, 2);
  Report r;
  double rel = 0.0;
  for (const auto& M : fixtures()) {
    const GroupoidFamilies F = groupoid_families(M);
    r.merge(check_family_identities(F), M.name + "/");
    for (int t = 0; t < 100; ++t) {
      std::vector<cx> f(static_cast<std::size_t>(F.nerve.size()));
      for (auto& v : f) v = rng.complex_gaussian();
      const auto [lhs, rhs] = compare_integrals(M, F.nerve, f);
      for (std::size_t x = 0; x < lhs.size(); ++x) {
        const double scale = std::max(std::abs(lhs[x]), std::abs(rhs[x]));
        if (scale > 0) rel = std::max(rel, std::abs(lhs[x] - rhs[x]) / scale);
      }
    }
  }
  r.bound("iterated-integrals", rel, kCanonTol);
  std::ostringstream os;
  os << "weight tables exact; iterated integrals rel. error " << std::scientific << std::setprecision(1) << rel;
  return suite_detail::finish(2, "measure calculus", r, os.str(), sw);
}

inline CriterionResult criterion_canonical(const SuiteConfig&) {
  Stopwatch sw;
  Report r;
  for (const auto& M : fixtures()) {
    const GroupoidFamilies F = groupoid_families(M);
    double d = 0.0;
    auto take = [&d](const ModuleMap& m) { d = std::max({d, gram_defect(m), unitarity_defect(m)}); };
    for (int i = 0; i < 3; ++i) {
      take(gamma_compose(F.lambda[i], F.alpha));
      take(gamma_compose(F.lambda[i], F.alpha_tilde));
    }
    const auto Reg = regular_corr(M);
    take(gamma_fibre(source_corr(M), Reg));
    take(gamma_fibre(range_corr(M), Reg));
    r.bound(M.name, d, kCanonTol);
  }
  return suite_detail::finish(3, "canonical isomorphisms", r, suite_detail::worst(r), sw);
}

inline CriterionResult criterion_regular(const SuiteConfig& cfg) {
  Stopwatch sw;
  Rng rng = suite_detail::stream(cfg, 4);
  Report r;
  std::vector<MeasuredGroupoid> all = fixtures();
  for (auto& m : suite_detail::weighted_randoms(rng, cfg.trials)) all.push_back(m);
  double rep_d = 0.0, conv_d = 0.0;
  int bad = 0;
  for (const auto& M : all) {
    const Representation reg = regular_representation(M);
    const Report c = check_representation(reg, 1e-10);
    if (!c.ok()) ++bad;
    for (const auto& ch : c.checks) rep_d = std::max(rep_d, ch.max_defect);
    const ConvRep L = integrate_rep(reg);
    for (int g = 0; g < M.G.arrows(); ++g)
      conv_d = std::max(conv_d, max_abs(ModuleMap{reg.module, reg.module, L.ops[g] - regular_matrix(M, delta(M.G, g))}.normalized()));
  }
  r.add("representation", bad == 0, rep_d, std::to_string(all.size() - bad) + "/" + std::to_string(all.size()));
  r.bound("integrated-equals-convolution", conv_d, 1e-10);
  return suite_detail::finish(4, "regular representation", r,
                              std::to_string(all.size()) + " groupoids, " + suite_detail::worst(r), sw);
}

inline CriterionResult criterion_bounds(const SuiteConfig& cfg) {
  Stopwatch sw;
  Rng rng = suite_detail::stream(cfg, 5);
  Report r;
  double slack1 = 0.0, slack2 = 0.0;
  for (const auto& M : fixtures()) {
    for (int t = 0; t < 200; ++t) {
      const Representation rep = random_representation(M, rng, suite_detail::options_for(t));
      const ConvElement f = random_element(rng, M.G, rng.uniform(0.3, 1.0));
      const double n = operator_norm(integrate_rep(rep).map(f));
      const double b = integrated_bound(M, f), i = i_norm(M, f);
      slack1 = std::max(slack1, n - b);
      slack2 = std::max(slack2, b - i);
    }
  }
  r.bound("norm-below-bound", slack1, cfg.tol);
  r.bound("bound-below-inorm", slack2, cfg.tol);
  const Representation sw_rep = swap_cocycle_rep();
  const ConvElement f{1.0, 1.0};
  const double n = operator_norm(integrate_rep(sw_rep).map(f)), b = integrated_bound(sw_rep.base, f);
  r.bound("attained-Z2-swap", std::abs(n - b), cfg.tol, "norm " + std::to_string(n) + ", bound " + std::to_string(b));
  return suite_detail::finish(5, "integration bounds", r, "1000 pairs; Z2 swap attains " + std::to_string(n), sw);
}

inline CriterionResult criterion_roundtrips(const SuiteConfig& cfg) {
  Stopwatch sw;
  Rng rng = suite_detail::stream(cfg, 6);
  Report r;
  int n = 0, bad = 0;
  double worst = 0.0;
  for (const auto& M : fixtures())
    for (int t = 0; t < cfg.trials; ++t) {
      const Representation rep = random_representation(M, rng, suite_detail::options_for(t));
      Report a = roundtrip(rep, cfg.tol);
      const ConvRep L = integrate_rep(rep);
      a.merge(roundtrip(t % 2 ? scramble(L, rng) : L, M, cfg.tol), "conv/");
      ++n;
      if (!a.ok()) {
        ++bad;
        r.merge(a, M.name + "#" + std::to_string(t) + "/");
      }
      for (const auto& c : a.checks) worst = std::max(worst, c.max_defect);
    }
  r.add("round-trips", bad == 0, worst, std::to_string(n - bad) + "/" + std::to_string(n));
  return suite_detail::finish(6, "integration/disintegration round trips", r,
                              std::to_string(n) + " representations, " + suite_detail::worst(r), sw);
}

inline CriterionResult criterion_oracle(const SuiteConfig& cfg) {
  Stopwatch sw;
  Rng rng = suite_detail::stream(cfg, 7);
  Report r;
  double d = 0.0;
  int n = 0;
  std::vector<MeasuredGroupoid> all = fixtures();
  for (auto& m : suite_detail::weighted_randoms(rng, cfg.trials)) all.push_back(m);
  for (const auto& M : all) {
    std::vector<Representation> reps{regular_representation(M)};
    for (int t = 0; t < 4; ++t) reps.push_back(random_representation(M, rng, suite_detail::options_for(t)));
    for (const auto& rep : reps) {
      d = std::max(d, operator_defect(integrate_rep(rep), oracle_integrate(rep)));
      ++n;
    }
  }
  r.bound("two-paths-agree", d, 1e-10, std::to_string(n) + " representations");
  return suite_detail::finish(7, "two-path oracle", r, std::to_string(n) + " representations, " + suite_detail::worst(r), sw);
}

struct EtaleOutcome {
  Report report;
  int dim = 0;
};

// Full verification for S = all bisections of a groupoid with counting Haar.
inline EtaleOutcome etale_checks(const MeasuredGroupoid& M, const InverseSemigroup& S, Rng& rng, int reps, double tol = 1e-10) {
  EtaleOutcome out;
  auto& r = out.report;
  const auto chart = bisection_chart(S);
  if (S.kind == InverseSemigroup::Kind::bisections) {
    r.add("wide", is_wide(S, M.G));
    r.merge(germ_isomorphism(S, germ_groupoid(S), M.G), "germs/");
  }
  const CrossedProductAlgebra A = crossed_product(S);
  out.dim = A.dim();
  const AlgebraMap iso = canonical_iso_cstar(A, chart, M);
  r.merge(iso.report, "iso/");
  if (!iso.report.ok()) return out;
  std::vector<Representation> all{regular_representation(M)};
  for (int t = 0; t < reps; ++t) all.push_back(random_representation(M, rng, suite_detail::options_for(2 * t)));
  double rt = 0.0, pull = 0.0, crt = 0.0;
  for (const auto& rep : all) {
    const CovariantRep cov = groupoid_rep_to_covariant(rep, S, chart);
    r.merge(check_covariant(cov, S, tol), "covariant/");
    r.merge(check_partial_isometries(partial_isometry_form(cov, S), cov.space, S, tol), "partial-isometries/");
    const Reassembly back = covariant_to_groupoid_rep(cov, S, chart, M, tol);
    r.merge(back.report, "reassembly/");
    if (back.report.ok()) rt = std::max(rt, max_abs(back.rep.U.normalized() - rep.U.normalized()));
    const CrossedRep rho = integrate_covariant(cov, A);
    r.merge(check_crossed_rep(rho, A, tol), "crossed-rep/");
    const ConvRep L = integrate_rep(rep);
    for (int i = 0; i < A.dim(); ++i)
      pull = std::max(pull, max_abs(ModuleMap{L.space, L.space, rho.ops[i] - L.ops[iso.image[i]]}.normalized()));
    const CrossedRep again = integrate_covariant(rep_of_crossed_to_covariant(rho, A), A);
    for (int i = 0; i < A.dim(); ++i) crt = std::max(crt, max_abs(again.ops[i] - rho.ops[i]));
  }
  r.bound("groupoid-covariant-round-trip", rt, tol);
  r.bound("crossed-covariant-round-trip", crt, tol);
  r.bound("integration-commutes", pull, tol);
  Report dedup;
  for (const auto& c : r.checks) {
    bool merged = false;
    for (auto& d : dedup.checks)
      if (d.name == c.name) {
        d.pass = d.pass && c.pass;
        d.max_defect = std::max(d.max_defect, c.max_defect);
        if (d.witness.empty()) d.witness = c.witness;
        merged = true;
      }
    if (!merged) dedup.checks.push_back(c);
  }
  out.report = dedup;
  return out;
}

inline CriterionResult criterion_etale(const SuiteConfig& cfg) {
  Stopwatch sw;
  Rng rng = suite_detail::stream(cfg, 8);
  Report r;
  std::vector<MeasuredGroupoid> all{fixture("Z2"), fixture("P2"), fixture("X2")};
  for (int k = 0; k < 10; ++k) all.push_back(random_measured(rng, false, "etale-" + std::to_string(k)));
  std::ostringstream dims;
  for (const auto& M : all) {
    const InverseSemigroup S = bisection_semigroup(M.G, all_bisections(M.G));
    const EtaleOutcome e = etale_checks(M, S, rng, 2);
    r.add(M.name + "/dimension", e.dim == M.G.arrows(), 0.0, std::to_string(e.dim) + " vs " + std::to_string(M.G.arrows()));
    r.add(M.name + "/checks", e.report.ok(), 0.0, e.report.ok() ? std::string{} : [&] {
      for (const auto& c : e.report.checks)
        if (!c.pass) return c.name;
      return std::string{};
    }());
    double d = 0.0;
    for (const auto& c : e.report.checks) d = std::max(d, c.max_defect);
    r.checks.back().max_defect = d;
    dims << (dims.tellp() ? " " : "") << M.name << ":" << e.dim;
  }
  return suite_detail::finish(8, "etale crossed-product theorem", r, "dims " + dims.str(), sw);
}

inline CriterionResult criterion_transformation(const SuiteConfig& cfg) {
  Stopwatch sw;
  Rng rng = suite_detail::stream(cfg, 9);
  Report r;
  auto run = [&](const std::string& tag, const FiniteGroup& H, const GroupAction& A, int want) {
    PresetParams p;
    p.group = H;
    p.action = A;
    const MeasuredGroupoid T = measured(tag, build_preset(PresetKind::transformation, p));
    const Representation rep = random_representation(T, rng);
    const TransformationResult res = transformation_theorem(H, A, &rep);
    r.merge(res.report, tag + "/");
    r.add(tag + "/dimension", res.crossed_dim == want && res.T.G.arrows() == want, 0.0, std::to_string(res.crossed_dim));
    return res;
  };
  const auto Z2 = FiniteGroup::cyclic(2), Z3 = FiniteGroup::cyclic(3);
  const auto swap = run("swap", Z2, swap_action(), 4);
  r.add("swap/full-matrix-pattern", matches_pair_groupoid(swap.T.G));
  const auto rot = run("rotation", Z3, rotation_action(Z3, 3), 9);
  r.add("rotation/full-matrix-pattern", matches_pair_groupoid(rot.T.G));
  const auto triv = run("trivial", Z2, trivial_action(Z2, 1), 2);
  // Point masses multiply by the group law.
  bool group_law = true;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const ConvElement c = convolve(triv.T, delta(triv.T.G, a), delta(triv.T.G, b));
      group_law = group_law && c[Z2.mul(a, b)] == cx(1.0) && c[1 - Z2.mul(a, b)] == cx(0.0);
    }
  r.add("trivial/group-algebra", group_law && matrix_block_pattern(triv.T.G) == std::vector<std::pair<int, int>>{{1, 2}});
  return suite_detail::finish(9, "transformation-groupoid theorem", r, "dims swap 4, rotation 9, trivial 2", sw);
}

inline CriterionResult criterion_spaces(const SuiteConfig& cfg) {
  Stopwatch sw;
  Rng rng = suite_detail::stream(cfg, 10);
  Report r;
  std::vector<MeasuredGroupoid> all{fixture("X2")};
  for (int k = 0; k < cfg.trials; ++k) {
    const int n = rng.between(1, 4);
    std::vector<double> c(static_cast<std::size_t>(n));
    for (auto& v : c) v = std::round(rng.uniform(0.25, 4.0) * 64.0) / 64.0;
    all.push_back(measured("space-" + std::to_string(k), space_groupoid(n), c));
  }
  double d = 0.0, perturbed = 1e300;
  for (const auto& M : all) {
    for (int t = 0; t < 4; ++t) {
      const Representation rep = random_representation(M, rng, suite_detail::options_for(t));
      if (!check_representation(rep).ok()) r.add(M.name + "/representation", false);
      d = std::max(d, max_abs(rep.U.normalized() - Mat::Identity(rep.U.matrix.rows(), rep.U.matrix.cols())));
      // A non-identity unitary on a nonzero fibre must break the cocycle identity.
      if (rep.module.dim() > 0) {
        CocycleFamily fam = blockwise(rep);
        const int x = rep.module.left[0];
        fam.U[M.G.unit[x]] = fam.U[M.G.unit[x]] * std::polar(1.0, 0.5);
        const Representation wrong = from_cocycle(M, fam);
        const Check* c = check_representation(wrong).find("cocycle");
        perturbed = std::min(perturbed, c ? c->max_defect : 0.0);
      }
    }
  }
  r.bound("U-is-identity", d, kCanonTol);
  std::ostringstream pw;
  pw << "smallest cocycle defect " << std::scientific << std::setprecision(2) << perturbed;
  r.add("non-identity-rejected", perturbed > 1e-3, 0.0, pw.str());
  std::ostringstream os;
  os << all.size() << " unit groupoids, U - id " << std::scientific << std::setprecision(1) << d << ", perturbed cocycle defect "
     << perturbed;
  return suite_detail::finish(10, "space-groupoid degeneracy", r, os.str(), sw);
}

inline CriterionResult criterion_naturality(const SuiteConfig& cfg) {
  Stopwatch sw;
  Rng rng = suite_detail::stream(cfg, 11);
  Report r;
  int agree = 0, total = 0, positives = 0, negatives = 0;
  double ind = 0.0;
  for (const auto& M : fixtures()) {
    for (int t = 0; t < 20; ++t) {
      const CocycleOptions o = suite_detail::options_for(t);
      const Representation r1 = random_representation(M, rng, o);
      const Representation r3 = random_representation(M, rng, o);
      const Representation sum = direct_sum(r1, r3);
      const ModuleMap W = graded_unitary(rng, sum.module);
      const Representation r2 = conjugate(sum, W);
      Mat inc = Mat::Zero(sum.module.dim(), r1.module.dim());
      inc.topLeftCorner(r1.module.dim(), r1.module.dim()) = Mat::Identity(r1.module.dim(), r1.module.dim());
      ModuleMap V = compose(W, ModuleMap{r1.module, sum.module, inc});
      if (t % 2 == 1) V = compose(graded_unitary(rng, sum.module), V);  // generically breaks the intertwining
      const bool rep_level = static_cast<bool>(check_intertwiner(V, r1, r2, cfg.tol));
      const ConvRep L1 = integrate_rep(r1), L2 = integrate_rep(r2);
      double d = 0.0;
      for (int g = 0; g < M.G.arrows(); ++g)
        d = std::max(d, max_abs(compose(V, ModuleMap{r1.module, r1.module, L1.ops[g]}).normalized() -
                                compose(ModuleMap{r2.module, r2.module, L2.ops[g]}, V).normalized()));
      const bool alg_level = d <= cfg.tol && isometry_defect(V) <= cfg.tol;
      agree += rep_level == alg_level;
      positives += rep_level;
      negatives += !rep_level;
      ++total;
      // Induction along a random correspondence commutes with integration.
      const Correspondence E = random_correspondence(rng, r1.module.y_size, rng.between(1, 2));
      const Representation up = induce(r1, E);
      const ConvRep Lu = integrate_rep(up);
      for (int g = 0; g < M.G.arrows(); ++g)
        ind = std::max(ind, max_abs(ModuleMap{up.module, up.module,
                                              Lu.ops[g] - tensor_id_right(ModuleMap{r1.module, r1.module, L1.ops[g]}, E).matrix}
                                        .normalized()));
    }
  }
  r.add("iff-agrees", agree == total, 0.0, std::to_string(agree) + "/" + std::to_string(total));
  r.add("both-directions-exercised", positives > 0 && negatives > 0, 0.0,
        std::to_string(positives) + " intertwiners, " + std::to_string(negatives) + " non-intertwiners");
  r.bound("induction-commutes", ind, cfg.tol);
  return suite_detail::finish(11, "naturality", r,
                              std::to_string(positives) + " intertwiners, " + std::to_string(negatives) + " non-intertwiners, " +
                                  suite_detail::worst(r),
                              sw);
}

using CriterionFn = std::function<CriterionResult(const SuiteConfig&)>;

inline std::vector<CriterionFn> criteria() {
  return {criterion_axioms,        criterion_measures, criterion_canonical, criterion_regular,
          criterion_bounds,        criterion_roundtrips, criterion_oracle,  criterion_etale,
          criterion_transformation, criterion_spaces,  criterion_naturality};
}

inline CriterionResult run_criterion(const CriterionFn& fn, const SuiteConfig& cfg, int id) {
  try {
    return fn(cfg);
  } catch (const std::exception& e) {
    CriterionResult c;
    c.id = id;
    c.title = "criterion " + std::to_string(id);
    c.detail = std::string("exception: ") + e.what();
    c.report.add("completed", false, 0.0, e.what());
    return c;
  }
}

inline std::vector<CriterionResult> run_suite(const SuiteConfig& cfg) {
  std::vector<CriterionResult> out;
  int id = 0;
  for (const auto& fn : criteria()) out.push_back(run_criterion(fn, cfg, ++id));
  return out;
}

}  // namespace gcstar

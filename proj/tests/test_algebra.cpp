#include "gcstar/intdis.hpp"
#include "gcstar/suite.hpp"

#include <gtest/gtest.h>

using namespace gcstar;

namespace {

int arrow(const MeasuredGroupoid& M, const std::string& n) {
  const int g = M.G.arrow_index(n);
  EXPECT_GE(g, 0) << n;
  return g;
}

void expect_element(const ConvElement& got, const ConvElement& want, double tol = 1e-14) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(std::abs(got[i] - want[i]), 0.0, tol) << "arrow " << i;
}

ConvElement ones(const FiniteGroupoid& G) { return ConvElement(static_cast<std::size_t>(G.arrows()), 1.0); }

}  // namespace

TEST(Convolution, GroupElementSquares) {
  const auto M = fixture("Z2");
  expect_element(convolve(M, delta(M.G, 1), delta(M.G, 1)), delta(M.G, 0));
}

TEST(Convolution, PairMatrixUnits) {
  const auto M = fixture("P2");
  const int a = arrow(M, "(1,2)"), b = arrow(M, "(2,1)");
  expect_element(convolve(M, delta(M.G, a), delta(M.G, b)), delta(M.G, arrow(M, "(1,1)")));
  expect_element(convolve(M, delta(M.G, b), delta(M.G, a)), delta(M.G, arrow(M, "(2,2)")));
  expect_element(convolve(M, delta(M.G, a), delta(M.G, a)), ConvElement(4, 0.0));
}

TEST(Convolution, WeightedPairScalesByHaarWeight) {
  const auto M = fixture("W2");
  const int a = arrow(M, "(1,2)"), b = arrow(M, "(2,1)");
  ConvElement want(4, 0.0);
  want[arrow(M, "(1,1)")] = 4.0;
  expect_element(convolve(M, delta(M.G, a), delta(M.G, b)), want);
  want.assign(4, 0.0);
  want[arrow(M, "(2,2)")] = 1.0;
  expect_element(convolve(M, delta(M.G, b), delta(M.G, a)), want);
}

TEST(Convolution, StarConjugatesAndInverts) {
  const auto M = fixture("P2");
  ConvElement f(4, 0.0);
  f[arrow(M, "(1,2)")] = cx(0.0, 1.0);
  ConvElement want(4, 0.0);
  want[arrow(M, "(2,1)")] = cx(0.0, -1.0);
  expect_element(star(M.G, f), want);
}

TEST(Convolution, AssociativeAndStarAntimultiplicative) {
  Rng rng(2);
  for (const auto& M : fixtures()) {
    const auto f = random_element(rng, M.G), g = random_element(rng, M.G), h = random_element(rng, M.G);
    expect_element(convolve(M, convolve(M, f, g), h), convolve(M, f, convolve(M, g, h)), 1e-11);
    expect_element(star(M.G, convolve(M, f, g)), convolve(M, star(M.G, g), star(M.G, f)), 1e-11);
  }
}

TEST(Norms, INormExamples) {
  const auto Z = fixture("Z2");
  EXPECT_DOUBLE_EQ(i_norm(Z, ones(Z.G)), 2.0);
  const auto W = fixture("W2");
  EXPECT_DOUBLE_EQ(i_norm(W, delta(W.G, arrow(W, "(1,2)"))), 4.0);
  EXPECT_DOUBLE_EQ(integrated_bound(W, delta(W.G, arrow(W, "(1,2)"))), 2.0);
}

TEST(Norms, RegularNormExamples) {
  const auto Z = fixture("Z2");
  EXPECT_NEAR(cstar_norm(Z, ones(Z.G)), 2.0, 1e-12);
  const auto P = fixture("P2");
  EXPECT_NEAR(cstar_norm(P, ones(P.G)), 2.0, 1e-12);
  const auto W = fixture("W2");
  EXPECT_NEAR(cstar_norm(W, delta(W.G, arrow(W, "(1,2)"))), 2.0, 1e-12);
}

TEST(Norms, PairRegularMatrixColumns) {
  const auto M = fixture("P2");
  const Mat L = regular_matrix(M, delta(M.G, arrow(M, "(1,2)")));
  EXPECT_EQ(L(arrow(M, "(1,1)"), arrow(M, "(2,1)")), cx(1.0));
  EXPECT_EQ(L(arrow(M, "(1,2)"), arrow(M, "(2,2)")), cx(1.0));
  EXPECT_EQ(L.cwiseAbs().sum(), 2.0);
}

TEST(Norms, RegularIsStarHomomorphismAndBounded) {
  Rng rng(8);
  for (const auto& M : fixtures()) {
    for (int t = 0; t < 10; ++t) {
      const auto f = random_element(rng, M.G), g = random_element(rng, M.G);
      const ModuleMap lf = regular_operator(M, f);
      EXPECT_LT(max_abs(regular_matrix(M, convolve(M, f, g)) - regular_matrix(M, f) * regular_matrix(M, g)), 1e-10);
      EXPECT_LT(max_abs(adjoint(lf).matrix - regular_matrix(M, star(M.G, f))), 1e-10);
      const double n = cstar_norm(M, f);
      EXPECT_LE(n, integrated_bound(M, f) + 1e-10);
      EXPECT_LE(integrated_bound(M, f), i_norm(M, f) + 1e-10);
      EXPECT_LE(cstar_norm(M, convolve(M, f, g)), n * cstar_norm(M, g) + 1e-10);
    }
  }
}

TEST(Representations, WeightedRawBlocks) {
  const auto M = fixture("W2");
  CocycleFamily fam{graded_space({{1}, {1}}), std::vector<Mat>(4, Mat::Identity(1, 1))};
  const Representation rep = from_cocycle(M, fam);
  const Correspondence Ls = l2(source_corr(M));
  std::map<std::string, cx> raw;
  for (int c = 0; c < rep.U.source.dim(); ++c) {
    const int g = Ls.origin[rep.U.source.factors[c].first];
    for (int r = 0; r < rep.U.target.dim(); ++r)
      if (rep.U.matrix(r, c) != cx(0.0)) raw[M.G.arrow_names[g]] = rep.U.matrix(r, c);
  }
  EXPECT_NEAR(std::abs(raw["(1,2)"] - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(raw["(2,1)"] - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(raw["(1,1)"] - 1.0), 0.0, 1e-15);
  EXPECT_TRUE(check_representation(rep).ok());
  EXPECT_LT(unitarity_defect(rep.U), 1e-12);
}

TEST(Representations, RegularOnFixtures) {
  for (const auto& M : fixtures()) {
    const auto rep = regular_representation(M);
    EXPECT_TRUE(check_representation(rep, 1e-10).ok()) << M.name;
    EXPECT_TRUE(check_cocycle(M, blockwise(rep), 1e-10).ok()) << M.name;
  }
}

TEST(Representations, SpaceGroupoidRegularIsIdentity) {
  const auto M = fixture("X2");
  const auto fam = blockwise(regular_representation(M));
  for (const auto& u : fam.U) EXPECT_LT(max_abs(u - Mat::Identity(u.rows(), u.cols())), 1e-12);
}

TEST(Representations, GroupRegularIsSwap) {
  const auto M = fixture("Z2");
  const auto rep = regular_representation(M);
  const ConvRep L = integrate_rep(rep);
  Mat swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  EXPECT_LT(max_abs(L.ops[1] - swap), 1e-12);
  const auto ev = hermitian_eigenvalues(L(ones(M.G)));
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  EXPECT_NEAR(ev[1], 2.0, 1e-12);
}

TEST(Representations, IntertwinerExamples) {
  const auto M = fixture("P2");
  const auto rep = regular_representation(M);
  EXPECT_TRUE(static_cast<bool>(check_intertwiner(identity_map(rep.module), rep, rep)));

  // Exchanging two arrows with the same source keeps the coefficient grading but not the object grading.
  std::vector<int> perm(4);
  std::iota(perm.begin(), perm.end(), 0);
  int i11 = -1, i21 = -1;
  for (int k = 0; k < rep.module.dim(); ++k) {
    if (rep.module.origin[k] == arrow(M, "(1,1)")) i11 = k;
    if (rep.module.origin[k] == arrow(M, "(2,1)")) i21 = k;
  }
  ASSERT_GE(i11, 0);
  ASSERT_GE(i21, 0);
  std::swap(perm[i11], perm[i21]);
  Mat p = Mat::Zero(4, 4);
  for (int k = 0; k < 4; ++k) p(perm[k], k) = 1.0;
  const ModuleMap V{rep.module, rep.module, from_normalized(rep.module, rep.module, p)};
  const auto chk = check_intertwiner(V, rep, rep);
  EXPECT_TRUE(chk.isometry);
  EXPECT_FALSE(chk.intertwines);

  const auto sum = direct_sum(rep, rep);
  Mat inc = Mat::Zero(8, 4);
  inc.topRows(4) = Mat::Identity(4, 4);
  EXPECT_TRUE(static_cast<bool>(check_intertwiner(ModuleMap{rep.module, sum.module, inc}, rep, sum)));
}

TEST(Representations, SupportInvariance) {
  const auto M = fixture("P2");
  EXPECT_TRUE(invariant_support(regular_representation(M)).report.ok());
  // A module over one object of a transitive groupoid has no room for U.
  CocycleFamily fam{graded_space({{1}, {0}}), {}};
  for (int g = 0; g < 4; ++g) {
    const bool diag = M.G.src[g] == 0 && M.G.rng[g] == 0;
    fam.U.push_back(diag ? Mat(Mat::Identity(1, 1)) : Mat(Mat::Zero(M.G.rng[g] == 0 ? 1 : 0, M.G.src[g] == 0 ? 1 : 0)));
  }
  const auto rep = from_cocycle(M, fam);
  EXPECT_FALSE(invariant_support(rep).report.ok());
  EXPECT_FALSE(check_representation(rep).ok());
}

TEST(Representations, InductionAlongIdentity) {
  const auto M = fixture("W2");
  Rng rng(6);
  const auto rep = random_representation(M, rng, {2, 2, true});
  const auto up = induce(rep, graded_space({{1, 0}, {0, 1}}));
  EXPECT_TRUE(check_representation(up).ok());
  EXPECT_EQ(up.module.dim(), rep.module.dim());
  EXPECT_LT(operator_defect(integrate_rep(up), integrate_rep(rep)), 1e-10);
}

TEST(Integration, FactorizationIndependence) {
  Rng rng(12);
  for (const auto& M : fixtures()) {
    const auto rep = random_representation(M, rng, {1, 2, true});
    const auto f = random_element(rng, M.G);
    const Mat a = integrated_operator(rep, f);
    const Mat b = integrated_operator(rep, ones(M.G), f);
    ConvElement cf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) cf[i] = std::conj(f[i]);
    const Mat c = integrated_operator(rep, cf, ones(M.G));
    EXPECT_LT(max_abs(a - b), 1e-10) << M.name;
    EXPECT_LT(max_abs(a - c), 1e-10) << M.name;
  }
}

TEST(Integration, OracleAgreesOnRegular) {
  for (const auto& M : fixtures()) {
    const auto rep = regular_representation(M);
    EXPECT_LT(operator_defect(integrate_rep(rep), oracle_integrate(rep)), 1e-10) << M.name;
    EXPECT_TRUE(check_conv_rep(integrate_rep(rep), M).ok()) << M.name;
  }
}

TEST(Integration, BrokenConvRepsAreRejected) {
  const auto M = fixture("Z2");
  ConvRep L = integrate_rep(regular_representation(M));
  ConvRep flipped = L;
  flipped.ops[0] = -flipped.ops[0];
  const auto r1 = check_conv_rep(flipped, M);
  ASSERT_NE(r1.find("multiplicative"), nullptr);
  EXPECT_FALSE(r1.find("multiplicative")->pass);

  ConvRep zero = L;
  for (auto& op : zero.ops) op.setZero();
  const auto r2 = check_conv_rep(zero, M);
  ASSERT_NE(r2.find("nondegenerate"), nullptr);
  EXPECT_FALSE(r2.find("nondegenerate")->pass);
  EXPECT_THROW(disintegrate(zero, M), DisintegrationError);
}

TEST(Integration, PairingsAgreeOnBases) {
  for (const auto& M : fixtures()) {
    const Nerve N = nerve(M.G);
    double d = 0.0;
    for (int i = 0; i < N.size(); ++i)
      for (int j = 0; j < N.size(); ++j) {
        std::vector<cx> a(static_cast<std::size_t>(N.size()), 0.0), b = a;
        a[i] = 1.0;
        b[j] = 1.0;
        const auto s = pairing_s(M, N, a, b), r = pairing_r(M, N, a, b);
        for (std::size_t k = 0; k < s.size(); ++k) d = std::max(d, std::abs(s[k] - r[k]));
      }
    EXPECT_LT(d, 1e-12) << M.name;
  }
}

TEST(Disintegration, RegularGroupRoundTrip) {
  const auto rep = regular_representation(fixture("Z2"));
  const auto r = roundtrip(rep);
  EXPECT_TRUE(r.ok());
  const auto D = disintegrate(integrate_rep(rep), rep.base);
  EXPECT_LT(max_abs(blockwise(D.rep).U[1] - blockwise(rep).U[1]), 1e-12);
}

TEST(Disintegration, RandomRoundTrips) {
  Rng rng(31);
  for (const auto& M : fixtures())
    for (int t = 0; t < 4; ++t) {
      const auto rep = random_representation(M, rng, {1 + t % 2, 3, t >= 2});
      EXPECT_TRUE(roundtrip(rep).ok()) << M.name << " " << t;
      EXPECT_TRUE(roundtrip(scramble(integrate_rep(rep), rng), M).ok()) << M.name << " " << t;
    }
}

TEST(Disintegration, CyclicSeedExtends) {
  const auto M = fixture("Z2");
  const auto rep = regular_representation(M);
  const ConvRep L = integrate_rep(rep);
  PreRepresentation P;
  P.carrier = rep.module;
  P.seed = graded_space({{1}});
  P.iota = Mat::Zero(rep.module.dim(), 1);
  int e = -1;
  for (int k = 0; k < rep.module.dim(); ++k)
    if (rep.module.origin[k] == 0) e = k;
  ASSERT_GE(e, 0);
  P.iota(e, 0) = 1.0;
  for (const auto& op : L.ops) P.ops.push_back(op * P.iota);
  EXPECT_TRUE(check_prerep(P, M).ok());
  const auto ext = extend_prerep(P, M);
  EXPECT_TRUE(ext.report.ok());
  EXPECT_LT(operator_defect(ext.rep, L), 1e-10);
}

TEST(Disintegration, NonPositiveSeedRejected) {
  const auto M = fixture("Z2");
  const ConvRep L = integrate_rep(regular_representation(M));
  PreRepresentation P = as_prerep(L);
  P.ops[1] *= cx(0.0, 1.0);
  EXPECT_FALSE(check_prerep(P, M).ok());
}

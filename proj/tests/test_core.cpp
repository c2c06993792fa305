#include "gcstar/hilbmod.hpp"
#include "gcstar/random.hpp"
#include "gcstar/reps.hpp"
#include "gcstar/suite.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

using namespace gcstar;

namespace {

int arrow(const MeasuredGroupoid& M, const std::string& n) {
  const int g = M.G.arrow_index(n);
  EXPECT_GE(g, 0) << n;
  return g;
}

bool has_violation(const ValidationReport& r, const std::string& axiom, const std::string& witness) {
  for (const auto& v : r.violations)
    if (v.axiom == axiom && v.witness == witness) return true;
  return false;
}

}  // namespace

TEST(Linalg, JacobiMatchesReferenceSolver) {
  Rng rng(11);
  for (int n : {1, 2, 5, 9}) {
    Mat a = gaussian_matrix(rng, n, n);
    a = (a + a.adjoint()).eval();
    const auto mine = hermitian_eigenvalues(a);
    Eigen::SelfAdjointEigenSolver<Mat> ref(a);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(mine[i], ref.eigenvalues()(i), 1e-10);
  }
}

TEST(Linalg, SmallSymmetricSpectrum) {
  Mat a(2, 2);
  a << 2.0, 1.0, 1.0, 2.0;
  const HermitianEigen e = hermitian_eigen(a);
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 3.0, 1e-14);
  for (int k = 0; k < 2; ++k) {
    const Vec v = e.vectors.col(k);
    EXPECT_NEAR((a * v - e.values[k] * v).norm(), 0.0, 1e-13);
    EXPECT_NEAR(v.norm(), 1.0, 1e-13);
  }
}

TEST(Linalg, RightSolveEmptyOperands) {
  const Mat a(0, 3), b(2, 3);
  const Mat x = right_solve(a, b);
  EXPECT_EQ(x.rows(), 2);
  EXPECT_EQ(x.cols(), 0);
  EXPECT_EQ(max_abs(Mat(0, 0)), 0.0);
}

TEST(Random, SplitmixReferenceStream) {
  Rng r(0);
  EXPECT_EQ(r.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(r.next(), 0x6e789e6aa1b965f4ULL);
}

TEST(Random, HaarUnitaryIsUnitary) {
  Rng rng(3);
  for (int n : {1, 3, 6}) {
    const Mat u = haar_unitary(rng, n);
    EXPECT_LT(max_abs(u.adjoint() * u - Mat::Identity(n, n)), 1e-12);
  }
  const Mat v = haar_isometry(rng, 5, 2);
  EXPECT_LT(max_abs(v.adjoint() * v - Mat::Identity(2, 2)), 1e-12);
}

TEST(Groupoid, FixtureSizes) {
  const std::map<std::string, std::pair<int, int>> expect = {
      {"Z2", {1, 2}}, {"P2", {2, 4}}, {"X2", {2, 2}}, {"T2", {2, 4}}, {"W2", {2, 4}}};
  for (const auto& M : fixtures()) {
    EXPECT_TRUE(validate_groupoid(M.G).ok()) << M.name;
    EXPECT_TRUE(validate_haar(M.G, M.haar).ok()) << M.name;
    EXPECT_EQ(M.G.objects(), expect.at(M.name).first) << M.name;
    EXPECT_EQ(M.G.arrows(), expect.at(M.name).second) << M.name;
  }
}

TEST(Groupoid, CorruptedCompositionIsReported) {
  FiniteGroupoid G = pair_groupoid(2);
  const int a = G.arrow_index("(1,2)"), b = G.arrow_index("(2,1)");
  G.comp[static_cast<std::size_t>(a) * G.arrows() + b] = G.arrow_index("(2,2)");
  const auto r = validate_groupoid(G);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_violation(r, "range-of-composite", "((1,2),(2,1))"));
}

TEST(Groupoid, PairComposition) {
  const auto G = pair_groupoid(3);
  EXPECT_EQ(G.compose(G.arrow_index("(1,2)"), G.arrow_index("(2,3)")), G.arrow_index("(1,3)"));
  EXPECT_EQ(G.compose(G.arrow_index("(1,2)"), G.arrow_index("(1,3)")), -1);
  EXPECT_EQ(G.rng[G.arrow_index("(1,2)")], G.object_index("1"));
  EXPECT_EQ(G.src[G.arrow_index("(1,2)")], G.object_index("2"));
}

TEST(Groupoid, TransformationRanges) {
  const auto M = fixture("T2");
  EXPECT_EQ(M.G.rng[arrow(M, "(g,1)")], M.G.object_index("2"));
  EXPECT_EQ(M.G.src[arrow(M, "(g,1)")], M.G.object_index("1"));
  EXPECT_EQ(M.G.rng[arrow(M, "(e,1)")], M.G.object_index("1"));
}

TEST(Groupoid, NerveSizes) {
  EXPECT_EQ(nerve(fixture("Z2").G).size(), 4);
  EXPECT_EQ(nerve(fixture("P2").G).size(), 8);
  EXPECT_EQ(nerve(fixture("X2").G).size(), 2);
  EXPECT_EQ(nerve(fixture("T2").G).size(), 8);
  EXPECT_EQ(nerve(pair_groupoid(3)).size(), 27);
}

TEST(Groupoid, NerveFaces) {
  const auto M = fixture("P2");
  const Nerve N = nerve(M.G);
  const int g = arrow(M, "(1,2)"), h = arrow(M, "(2,1)");
  const int i = N.find(g, h);
  ASSERT_GE(i, 0);
  EXPECT_EQ(N.d0[i], h);
  EXPECT_EQ(N.d1[i], arrow(M, "(1,1)"));
  EXPECT_EQ(N.d2[i], g);
  EXPECT_EQ(N.find(g, g), -1);
}

TEST(Groupoid, MutantsUsuallyFail) {
  Rng rng(5);
  int caught = 0;
  for (int t = 0; t < 20; ++t) {
    const auto G = random_groupoid(rng);
    try {
      caught += !validate_groupoid(mutate(G, rng)).ok();
    } catch (const StructuralError&) {
      ++caught;
    }
  }
  EXPECT_EQ(caught, 20);
}

TEST(Haar, WeightedPairIsValid) {
  const auto M = fixture("W2");
  EXPECT_TRUE(validate_haar(M.G, M.haar).ok());
  EXPECT_EQ(M.alpha(arrow(M, "(1,2)")), 4.0);
  EXPECT_EQ(M.alpha_tilde(arrow(M, "(1,2)")), 1.0);
}

TEST(Haar, BrokenLeftInvariance) {
  const auto M = fixture("W2");
  HaarSystem h = M.haar;
  h.weight[arrow(M, "(1,2)")] = 2.0;
  const auto r = validate_haar(M.G, h);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_violation(r, "left-invariance", "((1,2),(2,2))"));
  EXPECT_TRUE(has_violation(r, "left-invariance", "((2,1),(1,2))"));
}

TEST(Haar, NonPositiveWeight) {
  const auto M = fixture("Z2");
  HaarSystem h{{0.0, 0.0}};
  EXPECT_TRUE(has_violation(validate_haar(M.G, h), "positivity", "(e)"));
}

TEST(Measures, IntegrateAlongMap) {
  const MeasureFamily lam{FiniteMap{3, 2, {0, 0, 1}}, {1.0, 1.0, 2.0}};
  const auto out = integrate(lam, {2.0, 3.0, 1.0});
  EXPECT_EQ(out[0], cx(5.0));
  EXPECT_EQ(out[1], cx(2.0));
}

TEST(Measures, AlphaFibreMass) {
  const auto M = fixture("W2");
  const auto F = groupoid_families(M);
  const auto mass = integrate(F.alpha, std::vector<cx>(4, 1.0));
  EXPECT_EQ(mass[0], cx(5.0));
  EXPECT_EQ(mass[1], cx(5.0));
}

TEST(Measures, FibreProductWeight) {
  const auto M = fixture("W2");
  const auto V = source_corr(M);
  std::vector<double> w;
  for (int g = 0; g < M.G.arrows(); ++g) w.push_back(M.alpha_tilde(g));
  const auto W = make_correspondence(M.G.objects(), M.G.rng,
                                     MeasureFamily{FiniteMap{M.G.arrows(), M.G.objects(), M.G.src}, w});
  const auto fp = fibre_product(V, W);
  EXPECT_EQ(fp.corr.space(), 8);
  const int a = arrow(M, "(1,2)"), b = arrow(M, "(2,1)");
  bool found = false;
  for (std::size_t p = 0; p < fp.points.size(); ++p)
    if (fp.points[p] == std::make_pair(a, b)) {
      found = true;
      EXPECT_EQ(fp.corr.family.weight[p], M.c(0) * M.c(1));
      EXPECT_EQ(fp.corr.family.weight[p], 4.0);
    }
  EXPECT_TRUE(found);
}

TEST(Measures, FibreProductMatchesNerveFamily) {
  for (const char* name : {"Z2", "W2"}) {
    const auto M = fixture(name);
    const auto F = groupoid_families(M);
    std::vector<double> w;
    for (int g = 0; g < M.G.arrows(); ++g) w.push_back(M.alpha_tilde(g));
    const auto W = make_correspondence(M.G.objects(), M.G.rng,
                                       MeasureFamily{FiniteMap{M.G.arrows(), M.G.objects(), M.G.src}, w});
    const auto fp = fibre_product(source_corr(M), W);
    const auto C2 = make_correspondence(M.G.arrows(), F.nerve.d2,
                                        MeasureFamily{FiniteMap{F.nerve.size(), M.G.objects(), F.nerve.v2},
                                                      F.mu[2].weight});
    std::vector<int> phi(static_cast<std::size_t>(fp.corr.space()));
    for (std::size_t p = 0; p < fp.points.size(); ++p)
      phi[p] = F.nerve.find(fp.points[p].first, fp.points[p].second);
    const auto rep = check_corr_isomorphism(fp.corr, C2, phi, std::vector<double>(phi.size(), 1.0));
    EXPECT_TRUE(rep.ok()) << name;
  }
}

TEST(Measures, WrongDensityRejected) {
  const auto C = source_corr(fixture("P2"));
  std::vector<int> id(4);
  std::iota(id.begin(), id.end(), 0);
  EXPECT_TRUE(check_corr_isomorphism(C, C, id, std::vector<double>(4, 1.0)).ok());
  const auto bad = check_corr_isomorphism(C, C, id, std::vector<double>(4, 2.0));
  EXPECT_FALSE(bad.ok());
  ASSERT_NE(bad.find("measure-transport"), nullptr);
  EXPECT_FALSE(bad.find("measure-transport")->pass);
}

TEST(Measures, FamilyIdentitiesOnFixtures) {
  for (const auto& M : fixtures()) EXPECT_TRUE(check_family_identities(groupoid_families(M)).ok()) << M.name;
}

// With lambda1 weighted by c(s h) instead of c(s g), alpha.lambda1 and alpha.lambda2 disagree on W2.
TEST(Measures, MiddleFaceWeightUsesSourceOfFirstArrow) {
  const auto M = fixture("W2");
  auto F = groupoid_families(M);
  const int i = F.nerve.find(arrow(M, "(1,2)"), arrow(M, "(2,1)"));
  EXPECT_EQ(F.lambda[1].weight[i], 4.0);
  for (int k = 0; k < F.nerve.size(); ++k) F.lambda[1].weight[k] = M.c(M.G.src[F.nerve.pairs[k].second]);
  EXPECT_FALSE(same_family(compose_families(F.lambda[1], F.alpha), compose_families(F.lambda[2], F.alpha)));
}

TEST(Measures, IteratedIntegralsAgree) {
  Rng rng(9);
  for (const auto& M : fixtures()) {
    const Nerve N = nerve(M.G);
    std::vector<cx> f;
    for (int i = 0; i < N.size(); ++i) f.push_back(rng.complex_gaussian());
    const auto [lhs, rhs] = compare_integrals(M, N, f);
    for (std::size_t x = 0; x < lhs.size(); ++x) EXPECT_NEAR(std::abs(lhs[x] - rhs[x]), 0.0, 1e-12) << M.name;
  }
}

TEST(Hilbmod, L2Dimensions) {
  const auto E = l2(source_corr(fixture("P2")));
  EXPECT_EQ(E.dim(), 4);
  EXPECT_EQ(E.z_size, 4);
  EXPECT_EQ(E.y_size, 2);
  const auto Z = l2(source_corr(fixture("Z2")));
  const auto T = tensor(Z, graded_space({{2}}));
  EXPECT_EQ(T.dim(), 4);
  EXPECT_EQ(T.z_size, 2);
}

TEST(Hilbmod, CanonicalMapsAreUnitary) {
  for (const auto& M : fixtures()) {
    const auto F = groupoid_families(M);
    for (int i = 0; i < 3; ++i) {
      const auto a = gamma_compose(F.lambda[i], F.alpha);
      const auto b = gamma_compose(F.lambda[i], F.alpha_tilde);
      EXPECT_TRUE(is_unitary(a, 1e-12)) << M.name << " " << i;
      EXPECT_TRUE(is_unitary(b, 1e-12)) << M.name << " " << i;
      EXPECT_LT(gram_defect(a), 1e-12);
      EXPECT_LT(gram_defect(b), 1e-12);
    }
  }
}

TEST(Hilbmod, AssociatorIsUnitary) {
  Rng rng(21);
  for (int t = 0; t < 5; ++t) {
    const auto E = random_correspondence(rng, 2, 3);
    const auto F = random_correspondence(rng, 3, 2);
    const auto K = random_correspondence(rng, 2, 2);
    const auto a = associator(E, F, K);
    EXPECT_TRUE(is_unitary(a));
    EXPECT_TRUE(is_intertwiner(a));
  }
}

TEST(Hilbmod, CreationAdjointIdentity) {
  Rng rng(4);
  const auto E = random_correspondence(rng, 2, 3);
  const auto F = random_correspondence(rng, 3, 2);
  Vec x(E.dim());
  for (int i = 0; i < E.dim(); ++i) x(i) = rng.complex_gaussian();
  const auto T = creation(E, x, F);
  const Mat lhs = compose(adjoint(T), T).matrix;
  const auto ip = inner(E, x, x);
  Mat rhs = Mat::Zero(F.dim(), F.dim());
  for (int j = 0; j < F.dim(); ++j) rhs(j, j) = ip[F.left[j]];
  EXPECT_LT(max_abs(lhs - rhs), 1e-10);
}

TEST(Hilbmod, SwapOfGradedBlocks) {
  const auto E = graded_space({{1}, {1}});
  Mat s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  const ModuleMap m{E, E, s};
  EXPECT_TRUE(is_unitary(m));
  EXPECT_FALSE(is_intertwiner(m));
}

#include "gcstar/crossed.hpp"
#include "gcstar/suite.hpp"

#include <gtest/gtest.h>

using namespace gcstar;

namespace {

int element_with_key(const InverseSemigroup& S, const std::vector<int>& key) {
  for (int a = 0; a < S.size(); ++a)
    if (S.keys[a] == key) return a;
  return -1;
}

Mat swap2() {
  Mat s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

}  // namespace

TEST(PartialBijections, ComposeAndInverse) {
  const PartialBijection a{{1, -1, 0}}, b{{2, 0, -1}};
  EXPECT_EQ(compose(a, b).map, (std::vector<int>{0, 1, -1}));
  EXPECT_EQ(a.inverse().map, (std::vector<int>{2, 0, -1}));
  EXPECT_EQ(a.domain(), (std::vector<int>{0, 2}));
  EXPECT_TRUE(a.injective());
  EXPECT_FALSE((PartialBijection{{1, 1}}).injective());
}

TEST(Bisections, Counts) {
  EXPECT_EQ(all_bisections(fixture("Z2").G).size(), 3u);
  EXPECT_EQ(all_bisections(fixture("P2").G).size(), 7u);
  EXPECT_EQ(all_bisections(fixture("X2").G).size(), 4u);
}

TEST(Bisections, SizeGuard) {
  EXPECT_THROW(all_bisections(pair_groupoid(5)), SizeGuardError);
}

TEST(Bisections, WideOnlyWhenCovering) {
  const auto G = fixture("Z2").G;
  EXPECT_TRUE(is_wide(bisection_semigroup(G, all_bisections(G)), G));
  EXPECT_FALSE(is_wide(bisection_semigroup(G, {{-1}, {0}}), G));
}

TEST(Bisections, NaturalOrder) {
  const auto G = fixture("P2").G;
  const auto S = bisection_semigroup(G, all_bisections(G));
  const int empty = element_with_key(S, {-1, -1});
  const int units = element_with_key(S, {G.arrow_index("(1,1)"), G.arrow_index("(2,2)")});
  const int corner = element_with_key(S, {G.arrow_index("(1,1)"), -1});
  const int flip = element_with_key(S, {G.arrow_index("(2,1)"), G.arrow_index("(1,2)")});
  ASSERT_GE(empty, 0);
  ASSERT_GE(units, 0);
  ASSERT_GE(corner, 0);
  ASSERT_GE(flip, 0);
  EXPECT_TRUE(S.idempotent(units));
  EXPECT_FALSE(S.idempotent(flip));
  EXPECT_TRUE(S.leq(empty, flip));
  EXPECT_TRUE(S.leq(corner, units));
  EXPECT_FALSE(S.leq(corner, flip));
  EXPECT_EQ(S.mul(flip, flip), units);
}

TEST(Germs, GroupoidRecovered) {
  for (const char* name : {"Z2", "P2", "X2", "T2"}) {
    const auto G = fixture(name).G;
    const auto S = bisection_semigroup(G, all_bisections(G));
    const auto germs = germ_groupoid(S);
    EXPECT_EQ(germs.G.arrows(), G.arrows()) << name;
    EXPECT_TRUE(validate_groupoid(germs.G).ok()) << name;
    EXPECT_TRUE(germ_isomorphism(S, germs, G).ok()) << name;
  }
}

TEST(Germs, PartialBijectionSemigroup) {
  const auto S = generate_semigroup(2, {PartialBijection{{1, 0}}});
  const auto germs = germ_groupoid(S);
  EXPECT_EQ(germs.G.arrows(), 4);
  EXPECT_TRUE(matches_pair_groupoid(germs.G));
  EXPECT_THROW(germ_groupoid(generate_semigroup(2, {PartialBijection{{0, -1}}})), std::invalid_argument);
}

TEST(CrossedProduct, Dimensions) {
  const std::map<std::string, int> want = {{"Z2", 2}, {"P2", 4}, {"X2", 2}, {"T2", 4}};
  for (const auto& [name, d] : want) {
    const auto M = fixture(name);
    const auto S = bisection_semigroup(M.G, all_bisections(M.G));
    const auto A = crossed_product(S);
    EXPECT_EQ(A.dim(), d) << name;
    const auto iso = canonical_iso_cstar(A, bisection_chart(S), M);
    EXPECT_TRUE(iso.report.ok()) << name;
  }
}

TEST(CrossedProduct, RegularRepresentationOfGroupCase) {
  const auto M = fixture("Z2");
  const auto S = bisection_semigroup(M.G, all_bisections(M.G));
  const auto A = crossed_product(S);
  const auto rho = crossed_regular_rep(A);
  EXPECT_TRUE(check_crossed_rep(rho, A).ok());
  const auto cov = rep_of_crossed_to_covariant(rho, A);
  EXPECT_TRUE(check_covariant(cov, S).ok());
  const int g = element_with_key(S, {1});
  ASSERT_GE(g, 0);
  EXPECT_LT(max_abs(cov.U[g] - swap2()), 1e-12);
}

TEST(Covariant, SwapCocycle) {
  const auto rep = swap_cocycle_rep();
  const auto S = bisection_semigroup(rep.base.G, all_bisections(rep.base.G));
  const auto cov = groupoid_rep_to_covariant(rep, S, bisection_chart(S));
  EXPECT_TRUE(check_covariant(cov, S).ok());
  const int g = element_with_key(S, {1}), e = element_with_key(S, {0});
  EXPECT_LT(max_abs(cov.U[g] - swap2()), 1e-12);
  EXPECT_LT(max_abs(cov.U[e] - Mat::Identity(2, 2)), 1e-12);
}

TEST(Covariant, SignCharacter) {
  const auto M = fixture("Z2");
  CocycleFamily fam{graded_space({{1}}), {Mat::Identity(1, 1), -Mat::Identity(1, 1)}};
  const auto rep = from_cocycle(M, fam);
  ASSERT_TRUE(check_representation(rep).ok());
  const auto S = bisection_semigroup(M.G, all_bisections(M.G));
  const auto chart = bisection_chart(S);
  const auto cov = groupoid_rep_to_covariant(rep, S, chart);
  EXPECT_NEAR(cov.U[element_with_key(S, {1})](0, 0).real(), -1.0, 1e-15);
  const auto back = covariant_to_groupoid_rep(cov, S, chart, M);
  EXPECT_TRUE(back.report.ok());
  EXPECT_LT(max_abs(back.rep.U.normalized() - rep.U.normalized()), 1e-12);
}

TEST(Covariant, PartialIsometryLaw) {
  Rng rng(17);
  const auto M = fixture("P2");
  const auto S = bisection_semigroup(M.G, all_bisections(M.G));
  const auto chart = bisection_chart(S);
  for (int t = 0; t < 5; ++t) {
    const auto rep = random_representation(M, rng, {1 + t % 2, 3, false});
    const auto cov = groupoid_rep_to_covariant(rep, S, chart);
    EXPECT_TRUE(check_partial_isometries(partial_isometry_form(cov, S), cov.space, S).ok());
  }
}

TEST(Covariant, BrokenMultiplicativity) {
  const auto rep = swap_cocycle_rep();
  const auto S = bisection_semigroup(rep.base.G, all_bisections(rep.base.G));
  auto cov = groupoid_rep_to_covariant(rep, S, bisection_chart(S));
  const int g = element_with_key(S, {1});
  cov.U[g] = cx(0.0, 1.0) * cov.U[g];
  const auto r = check_covariant(cov, S);
  ASSERT_NE(r.find("axiom-3-multiplicative"), nullptr);
  EXPECT_FALSE(r.find("axiom-3-multiplicative")->pass);
}

TEST(Covariant, RequiresCountingMeasure) {
  Rng rng(1);
  const auto M = fixture("W2");
  const auto S = bisection_semigroup(M.G, all_bisections(M.G));
  const auto rep = random_representation(M, rng);
  EXPECT_THROW(groupoid_rep_to_covariant(rep, S, bisection_chart(S)), std::invalid_argument);
}

TEST(Transformation, SwapAction) {
  const auto res = transformation_theorem(swap_group(), swap_action());
  EXPECT_TRUE(res.report.ok());
  EXPECT_EQ(res.crossed_dim, 4);
  EXPECT_TRUE(matches_pair_groupoid(res.T.G));
}

TEST(Transformation, RotationWithRepresentation) {
  Rng rng(4);
  const auto Z3 = FiniteGroup::cyclic(3);
  const auto A = rotation_action(Z3, 3);
  PresetParams p;
  p.group = Z3;
  p.action = A;
  const auto T = measured("rot", build_preset(PresetKind::transformation, p));
  const auto rep = random_representation(T, rng, {2, 2, false});
  const auto res = transformation_theorem(Z3, A, &rep);
  EXPECT_TRUE(res.report.ok());
  EXPECT_EQ(res.crossed_dim, 9);
  ASSERT_NE(res.report.find("translation-round-trip"), nullptr);
}

TEST(Transformation, TrivialActionIsGroupAlgebra) {
  const auto Z2 = FiniteGroup::cyclic(2);
  const auto res = transformation_theorem(Z2, trivial_action(Z2, 1));
  EXPECT_TRUE(res.report.ok());
  EXPECT_EQ(res.crossed_dim, 2);
  EXPECT_EQ(matrix_block_pattern(res.T.G), (std::vector<std::pair<int, int>>{{1, 2}}));
  EXPECT_FALSE(matches_pair_groupoid(res.T.G));
}

#include "gcstar/io.hpp"
#include "gcstar/suite.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace gcstar;

namespace {

std::string data(const std::string& f) { return std::string(GCSTAR_TEST_DATA) + "/" + f; }

json without_timings(json j) {
  j.erase("timings");
  return j;
}

}  // namespace

TEST(GroupoidIo, RoundTripsFixtures) {
  for (const auto& M : fixtures()) {
    const json j = groupoid_json(M);
    const MeasuredGroupoid back = parse_groupoid(j, M.name);
    EXPECT_EQ(back.G.arrow_names, M.G.arrow_names);
    EXPECT_EQ(back.G.comp, M.G.comp);
    EXPECT_EQ(back.G.unit, M.G.unit);
    EXPECT_EQ(back.haar.weight, M.haar.weight);
    EXPECT_EQ(groupoid_json(back), j);
  }
}

TEST(GroupoidIo, WeightedFileMatchesFixture) {
  const auto M = parse_groupoid(read_json_file(data("weighted_pair.json")));
  EXPECT_TRUE(validate_groupoid(M.G).ok());
  EXPECT_TRUE(validate_haar(M.G, M.haar).ok());
  EXPECT_EQ(M.alpha(M.G.arrow_index("12")), 4.0);
  EXPECT_EQ(M.alpha_tilde(M.G.arrow_index("12")), 1.0);
}

TEST(GroupoidIo, BrokenFileParsesButFailsValidation) {
  const auto M = parse_groupoid(read_json_file(data("broken.json")));
  const auto r = validate_groupoid(M.G);
  ASSERT_FALSE(r.ok());
  bool assoc = false;
  for (const auto& v : r.violations) assoc = assoc || v.axiom == "associativity";
  EXPECT_TRUE(assoc);
}

TEST(GroupoidIo, MalformedInputs) {
  EXPECT_THROW(parse_groupoid(json::parse(R"({"objects": ["x"]})")), ParseError);
  EXPECT_THROW(parse_groupoid(json::parse(
                   R"({"objects":["x"],"arrows":[{"id":"e","src":"x","rng":"y"}],"inverse":{"e":"e"},"compose":[["e","e","e"]]})")),
               ParseError);
  EXPECT_THROW(parse_groupoid(json::parse(
                   R"({"objects":["x"],"arrows":[{"id":"e","src":"x","rng":"x"}],"inverse":{},"compose":[["e","e","e"]]})")),
               StructuralError);
  EXPECT_THROW(parse_groupoid(json::parse(
                   R"({"objects":["x"],"arrows":[{"id":"e","src":"x","rng":"x"}],"inverse":{"e":"e"},"compose":[]})")),
               StructuralError);
  EXPECT_THROW(read_json_file(data("does_not_exist.json")), ParseError);
}

TEST(RepBundleIo, SwapBundle) {
  const Representation rep = parse_rep_bundle(read_json_file(data("swap_rep.json")));
  EXPECT_TRUE(check_representation(rep).ok());
  const auto fam = blockwise(rep);
  Mat swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  EXPECT_LT(max_abs(fam.U[1] - swap), 1e-15);
}

TEST(RepBundleIo, RoundTrip) {
  Rng rng(13);
  for (const auto& M : fixtures()) {
    const auto rep = random_representation(M, rng, {2, 2, false});
    const auto back = parse_rep_bundle(rep_bundle_json(rep));
    EXPECT_EQ(back.module.left, rep.module.left) << M.name;
    EXPECT_EQ(back.module.right, rep.module.right) << M.name;
    EXPECT_LT(max_abs(back.U.normalized() - rep.U.normalized()), 1e-14) << M.name;
  }
}

TEST(RepBundleIo, ShapeErrors) {
  json j = read_json_file(data("swap_rep.json"));
  j["U"]["g"] = json::parse("[[0, 1]]");
  EXPECT_THROW(parse_rep_bundle(j), ParseError);
  j = read_json_file(data("swap_rep.json"));
  j["U"].erase("g");
  EXPECT_THROW(parse_rep_bundle(j), ParseError);
}

TEST(ComplexIo, AcceptedForms) {
  const Mat m = parse_matrix(json::parse(R"([[1, [0, 2]], [{"re": 3, "im": -1}, 0.5]])"), 2, 2, "m");
  EXPECT_EQ(m(0, 0), cx(1.0, 0.0));
  EXPECT_EQ(m(0, 1), cx(0.0, 2.0));
  EXPECT_EQ(m(1, 0), cx(3.0, -1.0));
  EXPECT_EQ(m(1, 1), cx(0.5, 0.0));
  EXPECT_THROW(parse_matrix(json::parse(R"([["x"]])"), 1, 1, "m"), ParseError);
  EXPECT_EQ(parse_matrix(matrix_json(m), 2, 2, "m"), m);
}

TEST(ReportIo, SortedAndIdempotent) {
  Report r;
  r.bound("zeta", 1e-13, 1e-9);
  r.add("alpha", false, 0.5, "(g,h)");
  const json j = report_json(r, "test");
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["ok"], false);
  EXPECT_EQ(j["checks"][0]["name"], "alpha");
  EXPECT_EQ(j["checks"][0]["witness"], "(g,h)");
  EXPECT_EQ(j["checks"][1]["status"], "pass");
  EXPECT_EQ(report_json(report_from_json(j), "test"), j);
  const std::string text = report_text(r);
  EXPECT_NE(text.find("FAIL"), std::string::npos);
  EXPECT_NE(text.find("5.00e-01"), std::string::npos);
}

TEST(ReportIo, DeterministicForFixedSeed) {
  SuiteConfig cfg;
  cfg.seed = 42;
  cfg.trials = 3;
  const auto a = criterion_roundtrips(cfg), b = criterion_roundtrips(cfg);
  EXPECT_EQ(without_timings(report_json(a.report, "suite")).dump(), without_timings(report_json(b.report, "suite")).dump());
}

TEST(DumpIo, RoundTrip) {
  Rng rng(5);
  const Mat m = gaussian_matrix(rng, 3, 4);
  const auto path = std::filesystem::temp_directory_path() / "gcstar_dump_test.bin";
  dump_matrix(path, m);
  EXPECT_EQ(std::filesystem::file_size(path), 3u * 4u * 16u);
  EXPECT_EQ(read_dump(path, 3, 4), m);
  EXPECT_THROW(read_dump(path, 4, 4), std::runtime_error);
  std::filesystem::remove(path);
}

TEST(GroupIo, ParsesGroupAndAction) {
  const FiniteGroup H = parse_group(read_json_file(data("z3.json")));
  EXPECT_EQ(H.order(), 3);
  EXPECT_TRUE(validate_group(H).ok());
  const GroupAction A = parse_action(read_json_file(data("z3_rotation.json")), H);
  EXPECT_TRUE(validate_action(H, A).ok());
  EXPECT_EQ(A.points.size(), 3u);
}

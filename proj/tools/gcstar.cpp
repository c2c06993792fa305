// gcstar: batch verification front end. Exit 0 if all checks pass, 1 on a failed check,
// 2 on a parse or validation error.
#include "gcstar/io.hpp"
#include "gcstar/suite.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace gcstar;

namespace {

struct Options {
  std::string groupoid_file;
  std::string preset;
  std::string bundle;
  std::string semigroup;
  std::string group_file;
  std::string action_file;
  std::string dump_dir;
  double tolerance = kTol;
  std::uint64_t seed = 7;
  int trials = 20;
  bool json_out = false;
  bool regular = false;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int parse_count(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int n = std::stoi(s, &pos);
    if (pos != s.size() || n < 1) throw std::invalid_argument(s);
    return n;
  } catch (const std::exception&) {
    throw InputError("bad parameter for " + what + ": '" + s + "'");
  }
}

FiniteGroupoid preset_groupoid(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon), arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  PresetParams p;
  if (colon == std::string::npos) {
    for (const auto& n : fixture_names())
      if (n == text) return fixture(text).G;
    throw InputError("unknown preset '" + text + "'");
  }
  if (kind == "group") {
    p.group = FiniteGroup::cyclic(parse_count(arg, kind));
    return build_preset(PresetKind::group, p);
  }
  if (kind == "pair" || kind == "space") {
    p.n = parse_count(arg, kind);
    return build_preset(kind == "pair" ? PresetKind::pair : PresetKind::space, p);
  }
  if (kind == "transformation") {
    const int n = parse_count(arg, kind);
    p.group = FiniteGroup::cyclic(n);
    p.action = rotation_action(p.group, n);
    return build_preset(PresetKind::transformation, p);
  }
  if (kind == "union") {
    std::stringstream ss(arg);
    std::string part;
    while (std::getline(ss, part, ',')) p.parts.push_back(preset_groupoid(part));
    if (p.parts.size() < 2) throw InputError("union needs at least two parts");
    return build_preset(PresetKind::disjoint_union, p);
  }
  throw InputError("unknown preset kind '" + kind + "'");
}

MeasuredGroupoid load_groupoid(const Options& o, const std::string& positional = {}) {
  const std::string file = !o.groupoid_file.empty() ? o.groupoid_file : positional;
  if (!file.empty() && !o.preset.empty()) throw InputError("give either --groupoid or --preset, not both");
  if (!file.empty()) return parse_groupoid(read_json_file(file), fs::path(file).stem().string());
  if (o.preset.empty()) throw InputError("no groupoid given (use --groupoid FILE or --preset NAME)");
  for (const auto& n : fixture_names())
    if (n == o.preset) return fixture(n);
  return measured(o.preset, preset_groupoid(o.preset));
}

// Structural and axiom checks shared by every command that reads a groupoid.
void require_valid(const MeasuredGroupoid& M) {
  if (auto r = validate_groupoid(M.G); !r.ok())
    throw InputError("groupoid axiom '" + r.violations[0].axiom + "' fails at " + r.violations[0].witness);
  if (auto r = validate_haar(M.G, M.haar); !r.ok())
    throw InputError("Haar axiom '" + r.violations[0].axiom + "' fails at " + r.violations[0].witness);
}

Representation load_rep(const Options& o, Rng& rng) {
  if (!o.bundle.empty()) {
    Representation rep = parse_rep_bundle(read_json_file(o.bundle));
    require_valid(rep.base);
    return rep;
  }
  const MeasuredGroupoid M = load_groupoid(o);
  require_valid(M);
  return o.regular ? regular_representation(M) : random_representation(M, rng);
}

void dump(const Options& o, const std::string& name, const Mat& m) {
  if (o.dump_dir.empty()) return;
  fs::create_directories(o.dump_dir);
  dump_matrix(fs::path(o.dump_dir) / (name + ".bin"), m);
}

std::string safe(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

int emit(const Options& o, const std::string& command, const Report& r, const json& extra = json::object(),
         const std::string& text = {}) {
  if (o.json_out) {
    std::cout << report_json(r, command, extra).dump(2) << "\n";
  } else {
    std::cout << text << report_text(r);
  }
  return r.ok() ? 0 : 1;
}

int cmd_validate(const Options& o, const std::string& positional) {
  const MeasuredGroupoid M = load_groupoid(o, positional);
  Report r;
  const auto vg = validate_groupoid(M.G);
  const auto vh = validate_haar(M.G, M.haar);
  r.add("groupoid-axioms", vg.ok(), 0.0, vg.ok() ? "" : vg.violations[0].axiom + " at " + vg.violations[0].witness);
  r.add("haar-axioms", vh.ok(), 0.0, vh.ok() ? "" : vh.violations[0].axiom + " at " + vh.violations[0].witness);
  json extra{{"objects", M.G.objects()}, {"arrows", M.G.arrows()}, {"counting_haar", M.counting()}};
  json violations = json::array();
  for (const auto& v : vg.violations) violations.push_back({{"axiom", v.axiom}, {"witness", v.witness}});
  for (const auto& v : vh.violations) violations.push_back({{"axiom", v.axiom}, {"witness", v.witness}});
  extra["violations"] = violations;
  if (o.json_out) {
    std::cout << report_json(r, "validate", extra).dump(2) << "\n";
  } else {
    std::cout << M.name << ": " << M.G.objects() << " objects, " << M.G.arrows() << " arrows\n";
    for (const auto& v : violations) std::cout << "violation: " << v["axiom"].get<std::string>() << " at " << v["witness"].get<std::string>() << "\n";
    std::cout << report_text(r);
  }
  return r.ok() ? 0 : 2;
}

int cmd_families(const Options& o, Rng& rng) {
  const MeasuredGroupoid M = load_groupoid(o);
  require_valid(M);
  const GroupoidFamilies F = groupoid_families(M);
  Report r = check_family_identities(F);
  double rel = 0.0;
  for (int t = 0; t < o.trials; ++t) {
    std::vector<cx> f(static_cast<std::size_t>(F.nerve.size()));
    for (auto& v : f) v = rng.complex_gaussian();
    const auto [lhs, rhs] = compare_integrals(M, F.nerve, f);
    for (std::size_t x = 0; x < lhs.size(); ++x) {
      const double s = std::max(std::abs(lhs[x]), std::abs(rhs[x]));
      if (s > 0) rel = std::max(rel, std::abs(lhs[x] - rhs[x]) / s);
    }
  }
  r.bound("iterated-integrals", rel, kCanonTol);
  json fam = json::object();
  std::size_t w = 6;
  for (const auto& [g, h] : F.nerve.pairs) w = std::max(w, M.G.tuple({g, h}).size() + 2);
  std::ostringstream text;
  text << std::left << std::setw(static_cast<int>(w)) << "pair";
  for (const char* c : {"lambda0", "lambda1", "lambda2", "mu0", "mu1", "mu2"}) text << std::setw(9) << c;
  text << "\n";
  for (int i = 0; i < F.nerve.size(); ++i) {
    const auto [g, h] = F.nerve.pairs[i];
    const std::string key = M.G.tuple({g, h});
    fam[key] = {F.lambda[0].weight[i], F.lambda[1].weight[i], F.lambda[2].weight[i],
                F.mu[0].weight[i],     F.mu[1].weight[i],     F.mu[2].weight[i]};
    text << std::left << std::setw(static_cast<int>(w)) << key;
    for (const auto& v : fam[key]) text << std::setw(9) << v.get<double>();
    text << "\n";
  }
  return emit(o, "families", r, json{{"weights", fam}}, text.str());
}

int cmd_algebra(const Options& o) {
  const MeasuredGroupoid M = load_groupoid(o);
  require_valid(M);
  const auto& G = M.G;
  json product = json::array();
  std::ostringstream text;
  for (int g = 0; g < G.arrows(); ++g)
    for (int h = 0; h < G.arrows(); ++h) {
      const ConvElement c = convolve(M, delta(G, g), delta(G, h));
      json terms = json::object();
      std::string line;
      for (int k = 0; k < G.arrows(); ++k)
        if (c[k] != cx(0.0)) {
          terms[G.arrow_names[k]] = c[k].imag() == 0.0 ? json(c[k].real()) : json{c[k].real(), c[k].imag()};
          line += (line.empty() ? "" : " + ") + std::to_string(c[k].real()) + " d" + G.arrow_names[k];
        }
      product.push_back({G.arrow_names[g], G.arrow_names[h], terms});
      text << "d" << G.arrow_names[g] << " * d" << G.arrow_names[h] << " = " << (line.empty() ? "0" : line) << "\n";
    }
  json inorm = json::object(), cnorm = json::object();
  Report r;
  double slack = 0.0;
  ConvElement all(static_cast<std::size_t>(G.arrows()), 1.0);
  for (int g = 0; g <= G.arrows(); ++g) {
    const ConvElement f = g < G.arrows() ? delta(G, g) : all;
    const std::string key = g < G.arrows() ? G.arrow_names[g] : "sum";
    const double in = i_norm(M, f), cs = cstar_norm(M, f);
    inorm[key] = in;
    cnorm[key] = cs;
    slack = std::max(slack, cs - in);
    text << "|d" << key << "|_I = " << in << "  |d" << key << "|* = " << cs << "\n";
  }
  r.bound("cstar-below-inorm", std::max(0.0, slack), o.tolerance);
  const Representation reg = regular_representation(M);
  const ConvRep L = integrate_rep(reg);
  double d = 0.0;
  for (int g = 0; g < G.arrows(); ++g) d = std::max(d, max_abs(ModuleMap{reg.module, reg.module, L.ops[g] - regular_matrix(M, delta(G, g))}.normalized()));
  r.bound("regular-integrates-to-convolution", d, o.tolerance);
  for (int g = 0; g < G.arrows(); ++g) dump(o, "regular_" + safe(G.arrow_names[g]), regular_matrix(M, delta(G, g)));
  return emit(o, "algebra", r, json{{"product", product}, {"inorm", inorm}, {"cstarnorm", cnorm}}, text.str());
}

int cmd_rep(const Options& o, Rng& rng) {
  const Representation rep = load_rep(o, rng);
  Report r = check_representation(rep, o.tolerance);
  r.merge(check_cocycle(rep.base, blockwise(rep), o.tolerance), "blockwise/");
  r.merge(invariant_support(rep).report);
  dump(o, "U", rep.U.matrix);
  return emit(o, "rep", r, json{{"bundle", rep_bundle_json(rep)}});
}

int cmd_integrate(const Options& o, Rng& rng) {
  const Representation rep = load_rep(o, rng);
  const ConvRep L = integrate_rep(rep);
  Report r = check_conv_rep(L, rep.base, {}, o.tolerance);
  r.bound("oracle-agrees", operator_defect(L, oracle_integrate(rep)), o.tolerance);
  for (int g = 0; g < rep.base.G.arrows(); ++g) dump(o, "L_" + safe(rep.base.G.arrow_names[g]), L.ops[g]);
  return emit(o, "integrate", r);
}

int cmd_disintegrate(const Options& o, Rng& rng) {
  const Representation rep = load_rep(o, rng);
  const ConvRep L = scramble(integrate_rep(rep), rng);
  const Disintegration D = disintegrate(L, rep.base, o.tolerance);
  Report r = D.report;
  r.merge(check_representation(D.rep, o.tolerance), "representation/");
  r.bound("reintegrates", operator_defect(to_carrier(integrate_rep(D.rep), D, L.space), L), o.tolerance);
  dump(o, "U", D.rep.U.matrix);
  dump(o, "identification", D.identification);
  return emit(o, "disintegrate", r);
}

int cmd_roundtrip(const Options& o, Rng& rng) {
  const MeasuredGroupoid M = load_groupoid(o);
  require_valid(M);
  Report r;
  for (int t = 0; t < o.trials; ++t) {
    CocycleOptions opt;
    opt.coefficients = 1 + t % 2;
    opt.weighted_module = (t / 2) % 2 == 1;
    const Representation rep = random_representation(M, rng, opt);
    const std::string tag = "trial-" + std::string(t < 10 ? "0" : "") + std::to_string(t);
    Report a = roundtrip(rep, o.tolerance);
    a.merge(roundtrip(scramble(integrate_rep(rep), rng), M, o.tolerance), "conv/");
    double d = 0.0;
    for (const auto& c : a.checks) d = std::max(d, c.max_defect);
    std::string failing;
    for (const auto& c : a.checks)
      if (!c.pass) failing += (failing.empty() ? "" : ",") + c.name;
    r.add(tag, a.ok(), d, failing);
  }
  return emit(o, "roundtrip", r);
}

int cmd_etale(const Options& o, Rng& rng) {
  MeasuredGroupoid M = load_groupoid(o);
  require_valid(M);
  if (!M.counting()) throw InputError("etale: the Haar system must be counting measure (c = 1)");
  Report r;
  json extra;
  EtaleOutcome e;
  if (!o.semigroup.empty()) {
    const auto gens = parse_generators(read_json_file(o.semigroup), M.G.object_names);
    const InverseSemigroup S = generate_semigroup(M.G.objects(), gens);
    GermGroupoid germs = germ_groupoid(S);
    germs.G.object_names = M.G.object_names;
    const MeasuredGroupoid GM = measured("germs", germs.G);
    e = etale_checks(GM, S, rng, o.trials > 4 ? 4 : o.trials);
    extra = {{"semigroup_size", S.size()}, {"germs", germs.G.arrows()}, {"arrows", M.G.arrows()}};
  } else {
    const InverseSemigroup S = bisection_semigroup(M.G, all_bisections(M.G));
    e = etale_checks(M, S, rng, o.trials > 4 ? 4 : o.trials);
    extra = {{"semigroup_size", S.size()}, {"arrows", M.G.arrows()}};
    r.add("dimension", e.dim == M.G.arrows(), 0.0, std::to_string(e.dim) + " vs " + std::to_string(M.G.arrows()));
  }
  extra["crossed_product_dim"] = e.dim;
  r.merge(e.report);
  return emit(o, "etale", r, extra);
}

int cmd_trafo(const Options& o, Rng& rng) {
  FiniteGroup H = swap_group();
  GroupAction A = swap_action();
  if (!o.group_file.empty()) {
    H = parse_group(read_json_file(o.group_file));
    if (o.action_file.empty()) throw InputError("trafo: --group needs --action");
    A = parse_action(read_json_file(o.action_file), H);
  } else if (!o.action_file.empty()) {
    throw InputError("trafo: --action needs --group");
  }
  PresetParams p;
  p.group = H;
  p.action = A;
  const MeasuredGroupoid T = measured("transformation", build_preset(PresetKind::transformation, p));
  const Representation rep = random_representation(T, rng);
  const TransformationResult res = transformation_theorem(H, A, &rep, o.tolerance);
  json blocks = json::array();
  std::ostringstream text;
  text << "crossed product dimension " << res.crossed_dim << "; blocks";
  for (auto [k, h] : matrix_block_pattern(res.T.G)) {
    blocks.push_back({{"orbit", k}, {"isotropy", h}});
    text << " M_" << k << "(C*(H_" << h << "))";
  }
  text << "\n";
  return emit(o, "trafo", res.report, json{{"dimension", res.crossed_dim}, {"blocks", blocks}}, text.str());
}

int cmd_suite(const Options& o) {
  SuiteConfig cfg;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.tol = o.tolerance;
  Report r;
  json crit = json::array();
  std::ostringstream text;
  for (const auto& c : run_suite(cfg)) {
    const std::string name = std::string("criterion-") + (c.id < 10 ? "0" : "") + std::to_string(c.id);
    double d = 0.0;
    for (const auto& ch : c.report.checks) d = std::max(d, ch.max_defect);
    r.add(name, c.pass, d, c.pass ? std::string{} : c.detail).seconds = c.seconds;
    crit.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"detail", c.detail}});
    text << (c.pass ? "PASS " : "FAIL ") << name << " " << c.title << ": " << c.detail << "\n";
  }
  return emit(o, "suite", r, json{{"criteria", crit}}, text.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification of groupoid C*-algebra constructions on finite groupoids"};
  app.require_subcommand(1);
  Options o;
  std::string positional, rep_action;
  auto common = [&o](CLI::App* s) {
    s->add_option("--groupoid", o.groupoid_file, "groupoid JSON file");
    s->add_option("--preset", o.preset, "Z2, P2, X2, T2, W2, group:N, pair:N, space:N, transformation:N, union:A,B");
    s->add_option("--tolerance", o.tolerance, "defect tolerance")->check(CLI::PositiveNumber);
    s->add_option("--seed", o.seed, "random seed");
    s->add_option("--trials", o.trials, "random instances")->check(CLI::Range(1, 1000000));
    s->add_flag("--json", o.json_out, "JSON report");
    s->add_option("--dump", o.dump_dir, "directory for binary matrix dumps");
  };
  auto* validate = app.add_subcommand("validate", "check groupoid and Haar axioms");
  validate->add_option("file", positional, "groupoid JSON file");
  auto* families = app.add_subcommand("families", "measure families on the nerve and their identities");
  auto* algebra = app.add_subcommand("algebra", "convolution structure constants and norms");
  auto* rep = app.add_subcommand("rep", "check a representation (bundle, regular or random)");
  rep->add_option("action", rep_action, "check")->check(CLI::IsMember({"check"}));
  auto* integrate = app.add_subcommand("integrate", "integrated form of a representation");
  auto* disint = app.add_subcommand("disintegrate", "disintegrate the integrated form of a representation");
  auto* roundtrip = app.add_subcommand("roundtrip", "integration/disintegration round trips on random representations");
  auto* etale = app.add_subcommand("etale", "bisections, germs and the crossed product S x C(X)");
  etale->add_option("--semigroup", o.semigroup, "generators JSON file");
  auto* trafo = app.add_subcommand("trafo", "transformation groupoid versus group crossed product");
  trafo->add_option("--group", o.group_file, "group JSON file");
  trafo->add_option("--action", o.action_file, "action JSON file");
  auto* suite = app.add_subcommand("suite", "acceptance battery");
  for (auto* s : {validate, families, algebra, rep, integrate, disint, roundtrip, etale, trafo, suite}) common(s);
  for (auto* s : {rep, integrate, disint}) {
    s->add_option("--bundle", o.bundle, "representation bundle JSON file");
    s->add_flag("--regular", o.regular, "use the regular representation");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    Rng rng(o.seed);
    if (*validate) return cmd_validate(o, positional);
    if (*families) return cmd_families(o, rng);
    if (*algebra) return cmd_algebra(o);
    if (*rep) return cmd_rep(o, rng);
    if (*integrate) return cmd_integrate(o, rng);
    if (*disint) return cmd_disintegrate(o, rng);
    if (*roundtrip) return cmd_roundtrip(o, rng);
    if (*etale) return cmd_etale(o, rng);
    if (*trafo) return cmd_trafo(o, rng);
    if (*suite) return cmd_suite(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SizeGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DisintegrationError& e) {
    std::cerr << "disintegration failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

#pragma once

#include "gcstar/crossed.hpp"
#include "gcstar/report.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gcstar {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

namespace detail {

inline std::string key_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError("expected a string or integer identifier, got " + v.dump());
}

inline int lookup(const std::vector<std::string>& names, const std::string& n, const char* what) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == n) return static_cast<int>(i);
  throw ParseError(std::string("unknown ") + what + " '" + n + "'");
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline cx parse_complex(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_object() && v.contains("re")) return {v.at("re").get<double>(), v.value("im", 0.0)};
  throw ParseError("bad complex number " + v.dump());
}

}  // namespace detail

// {"objects":[...], "arrows":[{"id","src","rng"}], "inverse":{...}, "compose":[[g,h,gh]...], "haar":{x: c}}
inline MeasuredGroupoid parse_groupoid(const json& j, const std::string& name = "input") {
  FiniteGroupoid G;
  for (const auto& o : detail::field(j, "objects")) G.object_names.push_back(detail::key_string(o));
  for (const auto& a : detail::field(j, "arrows")) {
    G.arrow_names.push_back(detail::key_string(detail::field(a, "id")));
    G.src.push_back(detail::lookup(G.object_names, detail::key_string(detail::field(a, "src")), "object"));
    G.rng.push_back(detail::lookup(G.object_names, detail::key_string(detail::field(a, "rng")), "object"));
  }
  const int n1 = G.arrows();
  G.inv.assign(static_cast<std::size_t>(n1), -1);
  for (const auto& [g, gi] : detail::field(j, "inverse").items())
    G.inv[detail::lookup(G.arrow_names, g, "arrow")] = detail::lookup(G.arrow_names, detail::key_string(gi), "arrow");
  for (int g = 0; g < n1; ++g)
    if (G.inv[g] < 0) throw StructuralError("arrow " + G.arrow_names[g] + " has no inverse entry");
  G.comp.assign(static_cast<std::size_t>(n1) * n1, -1);
  for (const auto& t : detail::field(j, "compose")) {
    if (!t.is_array() || t.size() != 3) throw ParseError("compose entries are [g, h, gh] triples");
    const int g = detail::lookup(G.arrow_names, detail::key_string(t[0]), "arrow");
    const int h = detail::lookup(G.arrow_names, detail::key_string(t[1]), "arrow");
    G.compose_ref(g, h) = detail::lookup(G.arrow_names, detail::key_string(t[2]), "arrow");
  }
  G.unit.assign(static_cast<std::size_t>(G.objects()), -1);
  for (int g = 0; g < n1; ++g)
    if (G.src[g] == G.rng[g] && G.compose(g, g) == g && G.unit[G.src[g]] < 0) G.unit[G.src[g]] = g;
  for (int x = 0; x < G.objects(); ++x)
    if (G.unit[x] < 0) throw StructuralError("object " + G.object_names[x] + " has no idempotent loop to serve as unit");
  check_structure(G);
  std::vector<double> c(static_cast<std::size_t>(G.objects()), 1.0);
  if (j.contains("haar"))
    for (const auto& [x, w] : j.at("haar").items()) {
      if (!w.is_number()) throw ParseError("haar weight for " + x + " is not a number");
      c[detail::lookup(G.object_names, x, "object")] = w.get<double>();
    }
  MeasuredGroupoid M{name, std::move(G), {}};
  M.haar = HaarSystem::from_c(M.G, c);
  return M;
}

inline json groupoid_json(const MeasuredGroupoid& M) {
  const auto& G = M.G;
  json j;
  j["objects"] = G.object_names;
  j["arrows"] = json::array();
  for (int g = 0; g < G.arrows(); ++g)
    j["arrows"].push_back({{"id", G.arrow_names[g]}, {"src", G.object_names[G.src[g]]}, {"rng", G.object_names[G.rng[g]]}});
  j["inverse"] = json::object();
  for (int g = 0; g < G.arrows(); ++g) j["inverse"][G.arrow_names[g]] = G.arrow_names[G.inv[g]];
  j["compose"] = json::array();
  for (int g = 0; g < G.arrows(); ++g)
    for (int h = 0; h < G.arrows(); ++h)
      if (G.compose(g, h) >= 0) j["compose"].push_back({G.arrow_names[g], G.arrow_names[h], G.arrow_names[G.compose(g, h)]});
  if (!M.counting()) {
    j["haar"] = json::object();
    for (int x = 0; x < G.objects(); ++x) j["haar"][G.object_names[x]] = M.c(x);
  }
  return j;
}

inline Mat parse_matrix(const json& j, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw ParseError(what + ": expected " + std::to_string(rows) + " rows");
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError(what + ": expected " + std::to_string(cols) + " columns");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = detail::parse_complex(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

inline json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

// {"groupoid": {...}, "dims": {"x": n or [n_w...]}, "U": {"g": matrix}} with U_g : H_{s g} -> H_{r g}.
inline Representation parse_rep_bundle(const json& j) {
  const MeasuredGroupoid M = parse_groupoid(detail::field(j, "groupoid"));
  const auto& G = M.G;
  std::vector<std::vector<int>> dims(static_cast<std::size_t>(G.objects()));
  std::size_t w = 1;
  for (const auto& [x, d] : detail::field(j, "dims").items()) {
    auto& slot = dims[detail::lookup(G.object_names, x, "object")];
    if (d.is_number_integer()) slot = {d.get<int>()};
    else slot = d.get<std::vector<int>>();
    w = std::max(w, slot.size());
  }
  for (auto& d : dims) {
    if (d.empty()) d = {0};
    if (d.size() == 1 && w > 1) d.assign(w, d[0]);
    if (d.size() != w) throw ParseError("dims: inconsistent coefficient counts");
    for (int v : d)
      if (v < 0) throw ParseError("dims: negative dimension");
  }
  const Correspondence H = graded_space(dims);
  CocycleFamily fam{H, std::vector<Mat>(static_cast<std::size_t>(G.arrows()))};
  const auto& U = detail::field(j, "U");
  for (int g = 0; g < G.arrows(); ++g) {
    const auto rows = fibre_indices(H, G.rng[g]), cols = fibre_indices(H, G.src[g]);
    const auto& name = G.arrow_names[g];
    if (!U.contains(name)) throw ParseError("U: missing block for arrow " + name);
    fam.U[g] = parse_matrix(U.at(name), static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()), "U[" + name + "]");
  }
  Representation rep = from_cocycle(M, fam);
  return rep;
}

inline json rep_bundle_json(const Representation& rep) {
  const auto fam = blockwise(rep);
  const auto& G = rep.base.G;
  json j;
  j["groupoid"] = groupoid_json(rep.base);
  j["dims"] = json::object();
  for (int x = 0; x < G.objects(); ++x) {
    std::vector<int> d(static_cast<std::size_t>(rep.module.y_size), 0);
    for (int i = 0; i < rep.module.dim(); ++i)
      if (rep.module.left[i] == x) ++d[rep.module.right[i]];
    if (d.size() == 1) j["dims"][G.object_names[x]] = d[0];
    else j["dims"][G.object_names[x]] = d;
  }
  j["U"] = json::object();
  for (int g = 0; g < G.arrows(); ++g) j["U"][G.arrow_names[g]] = matrix_json(fam.U[g]);
  return j;
}

// {"generators": [{"dom": [...], "map": {"x": "y"}}]} over the objects of G.
inline std::vector<PartialBijection> parse_generators(const json& j, const std::vector<std::string>& points) {
  std::vector<PartialBijection> gens;
  for (const auto& g : detail::field(j, "generators")) {
    PartialBijection p{std::vector<int>(points.size(), -1)};
    for (const auto& [x, y] : detail::field(g, "map").items())
      p.map[detail::lookup(points, x, "point")] = detail::lookup(points, detail::key_string(y), "point");
    if (g.contains("dom")) {
      std::vector<int> dom;
      for (const auto& x : g.at("dom")) dom.push_back(detail::lookup(points, detail::key_string(x), "point"));
      std::sort(dom.begin(), dom.end());
      if (dom != p.domain()) throw ParseError("generator 'dom' disagrees with the keys of 'map'");
    }
    if (!p.injective()) throw ParseError("generator is not injective");
    gens.push_back(p);
  }
  return gens;
}

// {"elements": [...], "table": [[...], ...]} with table[a][b] = ab by name.
inline FiniteGroup parse_group(const json& j) {
  FiniteGroup H;
  for (const auto& e : detail::field(j, "elements")) H.names.push_back(detail::key_string(e));
  const auto& t = detail::field(j, "table");
  if (!t.is_array() || t.size() != H.names.size()) throw ParseError("group table must have one row per element");
  for (const auto& row : t) {
    if (!row.is_array() || row.size() != H.names.size()) throw ParseError("group table rows must have one entry per element");
    for (const auto& v : row) H.table.push_back(detail::lookup(H.names, detail::key_string(v), "group element"));
  }
  if (auto r = validate_group(H); !r.ok()) throw ParseError("not a group: " + r.violations[0].axiom + " " + r.violations[0].witness);
  return H;
}

// {"points": [...], "act": {"g": {"x": "y"}}}
inline GroupAction parse_action(const json& j, const FiniteGroup& H) {
  GroupAction A;
  for (const auto& p : detail::field(j, "points")) A.points.push_back(detail::key_string(p));
  const std::size_t n = A.points.size();
  A.act.assign(static_cast<std::size_t>(H.order()), std::vector<int>(n, -1));
  for (const auto& [g, row] : detail::field(j, "act").items()) {
    auto& r = A.act[detail::lookup(H.names, g, "group element")];
    for (const auto& [x, y] : row.items()) r[detail::lookup(A.points, x, "point")] = detail::lookup(A.points, detail::key_string(y), "point");
  }
  for (int g = 0; g < H.order(); ++g)
    for (std::size_t x = 0; x < n; ++x)
      if (A.act[g][x] < 0) throw ParseError("action of " + H.names[g] + " undefined at " + A.points[x]);
  if (auto r = validate_action(H, A); !r.ok()) throw ParseError("not a group action: " + r.violations[0].axiom + " " + r.violations[0].witness);
  return A;
}

// Deterministic part first; timings live in their own section.
inline json report_json(const Report& report, const std::string& command, const json& extra = json::object()) {
  Report r = report;
  r.sort();
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["ok"] = r.ok();
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    json e{{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"max_defect", c.max_defect}};
    if (!c.witness.empty()) e["witness"] = c.witness;
    j["checks"].push_back(e);
  }
  for (const auto& [k, v] : extra.items()) j[k] = v;
  json t = json::object();
  for (const auto& c : r.checks) t[c.name] = c.seconds;
  j["timings"] = t;
  return j;
}

inline Report report_from_json(const json& j) {
  Report r;
  for (const auto& c : detail::field(j, "checks")) {
    auto& added = r.add(c.at("name").get<std::string>(), c.at("status").get<std::string>() == "pass",
                        c.at("max_defect").get<double>(), c.value("witness", std::string{}));
    if (j.contains("timings") && j.at("timings").contains(added.name)) added.seconds = j.at("timings").at(added.name).get<double>();
  }
  return r;
}

inline std::string format_defect(double d) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << d;
  return os.str();
}

inline std::string report_text(const Report& report) {
  Report r = report;
  r.sort();
  std::size_t w = 5;
  for (const auto& c : r.checks) w = std::max(w, c.name.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "check" << "  status  max_defect  witness\n";
  for (const auto& c : r.checks)
    os << std::left << std::setw(static_cast<int>(w)) << c.name << "  " << std::setw(6) << (c.pass ? "pass" : "FAIL") << "  "
       << std::setw(10) << format_defect(c.max_defect) << "  " << c.witness << "\n";
  os << (r.ok() ? "all checks pass" : "some checks FAIL") << " (" << r.checks.size() << ")\n";
  return os.str();
}

// Row-major, interleaved re/im, little-endian IEEE doubles.
inline void dump_matrix(const std::filesystem::path& path, const Mat& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  auto put = [&out](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
    out.write(reinterpret_cast<const char*>(b), 8);
  };
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      put(m(i, k).real());
      put(m(i, k).imag());
    }
}

inline Mat read_dump(const std::filesystem::path& path, Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  auto get = [&in]() {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  };
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) {
      const double re = get();
      m(i, k) = cx(re, get());
    }
  if (!in) throw std::runtime_error(path.string() + ": truncated dump");
  return m;
}

}  // namespace gcstar

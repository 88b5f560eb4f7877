#include "steinerlab/io.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>

namespace steinerlab {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw FormatError(field, message);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail("$", std::string("malformed JSON: ") + e.what());
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where.empty() ? "$" : where, "expected an object");
  if (!obj.contains(key)) fail(where.empty() ? key : where + "." + key, "missing field");
  return obj.at(key);
}

std::string path(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

int get_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) fail(field, "expected a boolean");
  return v.get<bool>();
}

Point get_point(const json& v, const std::string& field, std::optional<std::size_t> dim) {
  if (!v.is_array()) fail(field, "expected a coordinate list");
  std::vector<double> c;
  for (std::size_t i = 0; i < v.size(); ++i) c.push_back(get_number(v[i], field + "[" + std::to_string(i) + "]"));
  if (dim && c.size() != *dim) {
    fail(field, "dimension mismatch: expected " + std::to_string(*dim) + " coordinates, got " +
                    std::to_string(c.size()));
  }
  try {
    return Point(c);
  } catch (const std::exception& e) {
    fail(field, e.what());
  }
}

std::vector<Point> get_points(const json& v, const std::string& field, std::optional<std::size_t> dim) {
  if (!v.is_array()) fail(field, "expected a list of coordinate lists");
  std::vector<Point> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_point(v[i], field + "[" + std::to_string(i) + "]", dim));
    if (!dim) dim = out.back().dim();
  }
  return out;
}

std::vector<Edge> get_edges(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "expected a list of edges");
  std::vector<Edge> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != 2) fail(f, "expected a pair of node indices");
    out.push_back({get_int(v[i][0], f + "[0]"), get_int(v[i][1], f + "[1]")});
  }
  return out;
}

json point_json(const Point& p) { return p.to_vector(); }

json points_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(point_json(p));
  return a;
}

json edges_json(const std::vector<Edge>& edges) {
  json a = json::array();
  for (auto [u, v] : edges) a.push_back({u, v});
  return a;
}

json descriptor_json(const CompactSetDescriptor& desc) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return {{"kind", "circle"}, {"R", d.R}};
        } else if constexpr (std::is_same_v<T, Stadium>) {
          return {{"kind", "stadium"}, {"R", d.R}, {"seg_len", d.seg_len}};
        } else if constexpr (std::is_same_v<T, Polygon>) {
          return {{"kind", "polygon"}, {"vertices", points_json(d.vertices)}};
        } else if constexpr (std::is_same_v<T, FinitePoints>) {
          return {{"kind", "points"}, {"points", points_json(d.points)}};
        } else {
          return {{"kind", "samples"}, {"points", points_json(d.points)}};
        }
      },
      desc);
}

CompactSetDescriptor get_descriptor(const json& v, const std::string& field, std::size_t dim) {
  if (!v.is_object()) fail(field, "expected a descriptor object");
  const std::string kind = get_string(require(v, "kind", field), path(field, "kind"));
  CompactSetDescriptor desc;
  if (kind == "circle" || kind == "stadium" || kind == "polygon") {
    if (dim != 2) fail("dim", "curve descriptors need dim = 2");
  }
  if (kind == "circle") {
    desc = Circle{get_number(require(v, "R", field), path(field, "R"))};
  } else if (kind == "stadium") {
    desc = Stadium{get_number(require(v, "R", field), path(field, "R")),
                   get_number(require(v, "seg_len", field), path(field, "seg_len"))};
  } else if (kind == "polygon") {
    desc = Polygon{get_points(require(v, "vertices", field), path(field, "vertices"), dim)};
  } else if (kind == "points") {
    desc = FinitePoints{get_points(require(v, "points", field), path(field, "points"), dim)};
  } else if (kind == "samples") {
    desc = Samples{get_points(require(v, "points", field), path(field, "points"), dim)};
  } else {
    fail(path(field, "kind"), "unknown descriptor kind '" + kind + "'");
  }
  try {
    validate(desc);
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  }
  return desc;
}

ProblemKind get_problem(const json& v, const std::string& field) {
  const std::string s = get_string(v, field);
  if (s == "steiner") return ProblemKind::steiner;
  if (s == "mdm") return ProblemKind::mdm;
  fail(field, "unknown problem '" + s + "'");
}

std::string get_schema(const json& doc) {
  if (!doc.contains("schema_version")) return std::string(kSchemaVersion);
  const std::string v = get_string(doc["schema_version"], "schema_version");
  if (v != kSchemaVersion) fail("schema_version", "unsupported schema version '" + v + "'");
  return v;
}

json tol_json(const ToleranceConfig& t) {
  return {{"eps_len", t.eps_len},
          {"eps_angle", t.eps_angle},
          {"eps_tie", t.eps_tie},
          {"coverage_eps", t.coverage_eps}};
}

ToleranceConfig get_tol(const json& v, const std::string& field) {
  ToleranceConfig t;
  t.eps_len = get_number(require(v, "eps_len", field), path(field, "eps_len"));
  t.eps_angle = get_number(require(v, "eps_angle", field), path(field, "eps_angle"));
  t.eps_tie = get_number(require(v, "eps_tie", field), path(field, "eps_tie"));
  t.coverage_eps = get_number(require(v, "coverage_eps", field), path(field, "coverage_eps"));
  return t;
}

std::string dump(const json& j) { return j.dump(1, ' ') + "\n"; }

// Smallest angle at every contracted vertex of degree >= 2.
void fill_angles(ResultReport& rep, const ContractedTree& c) {
  for (std::size_t v = 0; v < c.adj.size(); ++v) {
    const auto& nb = c.adj[v];
    if (nb.size() < 2) continue;
    double smallest = kPi;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        smallest = std::min(smallest, angle_at(c.nodes[v], c.nodes[nb[i]], c.nodes[nb[j]]));
      }
    }
    rep.angles.push_back(smallest);
    rep.min_angle = rep.min_angle ? std::min(*rep.min_angle, smallest) : smallest;
  }
}

std::vector<int> degrees_of(const SegmentGraph& g) {
  std::vector<int> deg(g.vertices.size(), 0);
  for (auto [a, b] : g.edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

}  // namespace

FormatError::FormatError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

std::string_view problem_name(ProblemKind kind) {
  return kind == ProblemKind::steiner ? "steiner" : "mdm";
}

InstanceFile parse_instance(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) fail("$", "expected an object");
  InstanceFile inst;
  inst.schema_version = get_schema(doc);
  const int dim = get_int(require(doc, "dim", ""), "dim");
  if (dim < 2) fail("dim", "must be >= 2");
  inst.dim = static_cast<std::size_t>(dim);
  inst.problem = get_problem(require(doc, "problem", ""), "problem");
  const json& terms = require(doc, "terminals", "");
  if (inst.problem == ProblemKind::steiner) {
    inst.terminals = get_points(terms, "terminals", inst.dim);
    if (inst.terminals.empty()) fail("terminals", "need at least one terminal");
    if (doc.contains("r")) fail("r", "only valid for mdm instances");
  } else {
    inst.set = get_descriptor(terms, "terminals", inst.dim);
    if (!doc.contains("r")) fail("r", "missing field");
    inst.r = get_number(doc["r"], "r");
    if (!(*inst.r > 0.0)) fail("r", "must be > 0");
  }
  return inst;
}

std::string serialize_instance(const InstanceFile& inst) {
  json doc;
  doc["schema_version"] = inst.schema_version;
  doc["dim"] = inst.dim;
  doc["problem"] = problem_name(inst.problem);
  if (inst.problem == ProblemKind::steiner) {
    doc["terminals"] = points_json(inst.terminals);
  } else {
    if (inst.set) doc["terminals"] = descriptor_json(*inst.set);
    if (inst.r) doc["r"] = *inst.r;
  }
  return dump(doc);
}

std::string instance_digest(const InstanceFile& inst) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_instance(inst)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xF];
    h >>= 4;
  }
  return out;
}

ResultFile parse_result(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) fail("$", "expected an object");
  ResultFile res;
  res.schema_version = get_schema(doc);
  res.instance_digest = get_string(require(doc, "instance_digest", ""), "instance_digest");
  res.problem = get_problem(require(doc, "problem", ""), "problem");
  res.length = get_number(require(doc, "length", ""), "length");
  const json& net = require(doc, "network", "");
  res.network.vertices = get_points(require(net, "vertices", "network"), "network.vertices", std::nullopt);
  res.network.edges = get_edges(require(net, "edges", "network"), "network.edges");
  const int nv = static_cast<int>(res.network.vertices.size());
  for (std::size_t i = 0; i < res.network.edges.size(); ++i) {
    auto [a, b] = res.network.edges[i];
    if (a < 0 || b < 0 || a >= nv || b >= nv) {
      fail("network.edges[" + std::to_string(i) + "]", "node index out of range");
    }
  }
  res.n_terminals = get_int(require(doc, "n_terminals", ""), "n_terminals");
  if (res.n_terminals < 0 || res.n_terminals > nv) fail("n_terminals", "out of range");
  if (doc.contains("topology")) {
    const json& t = doc["topology"];
    Topology topo;
    topo.n_terminals = get_int(require(t, "n_terminals", "topology"), "topology.n_terminals");
    topo.n_steiner = get_int(require(t, "n_steiner", "topology"), "topology.n_steiner");
    topo.edges = get_edges(require(t, "edges", "topology"), "topology.edges");
    res.topology = std::move(topo);
  }
  const std::size_t dim = res.network.vertices.empty() ? 2 : res.network.vertices.front().dim();
  if (doc.contains("set")) res.set = get_descriptor(doc["set"], "set", dim);
  if (doc.contains("r")) res.r = get_number(doc["r"], "r");

  const json& rep = require(doc, "report", "");
  auto& out = res.report;
  if (rep.contains("degrees")) {
    if (!rep["degrees"].is_array()) fail("report.degrees", "expected a list");
    for (std::size_t i = 0; i < rep["degrees"].size(); ++i) {
      out.degrees.push_back(get_int(rep["degrees"][i], "report.degrees[" + std::to_string(i) + "]"));
    }
  }
  if (rep.contains("angles")) {
    if (!rep["angles"].is_array()) fail("report.angles", "expected a list");
    for (std::size_t i = 0; i < rep["angles"].size(); ++i) {
      out.angles.push_back(get_number(rep["angles"][i], "report.angles[" + std::to_string(i) + "]"));
    }
  }
  if (rep.contains("min_angle")) out.min_angle = get_number(rep["min_angle"], "report.min_angle");
  if (rep.contains("segment_count")) out.segment_count = get_int(rep["segment_count"], "report.segment_count");
  if (rep.contains("segment_bound")) out.segment_bound = get_int(rep["segment_bound"], "report.segment_bound");
  if (rep.contains("cominimal_count")) {
    out.cominimal_count = get_int(rep["cominimal_count"], "report.cominimal_count");
  }
  if (rep.contains("coverage")) {
    const json& c = rep["coverage"];
    out.coverage = ResultCoverage{
        get_number(require(c, "max_defect", "report.coverage"), "report.coverage.max_defect"),
        get_bool(require(c, "covered", "report.coverage"), "report.coverage.covered")};
  }
  if (rep.contains("energetic")) {
    const json& e = rep["energetic"];
    if (!e.is_array()) fail("report.energetic", "expected a list");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string f = "report.energetic[" + std::to_string(i) + "]";
      out.energetic.push_back(EnergeticPoint{get_point(require(e[i], "x", f), f + ".x", dim),
                                             get_point(require(e[i], "witness", f), f + ".witness", dim)});
    }
  }
  const json& meta = require(doc, "meta", "");
  res.meta.solver = get_string(require(meta, "solver", "meta"), "meta.solver");
  res.meta.iterations = get_int(require(meta, "iterations", "meta"), "meta.iterations");
  res.meta.converged = get_bool(require(meta, "converged", "meta"), "meta.converged");
  res.meta.tol = get_tol(require(meta, "tol", "meta"), "meta.tol");
  return res;
}

std::string serialize_result(const ResultFile& res) {
  json doc;
  doc["schema_version"] = res.schema_version;
  doc["instance_digest"] = res.instance_digest;
  doc["problem"] = problem_name(res.problem);
  doc["length"] = res.length;
  doc["network"] = {{"vertices", points_json(res.network.vertices)}, {"edges", edges_json(res.network.edges)}};
  doc["n_terminals"] = res.n_terminals;
  if (res.topology) {
    doc["topology"] = {{"n_terminals", res.topology->n_terminals},
                       {"n_steiner", res.topology->n_steiner},
                       {"edges", edges_json(res.topology->edges)}};
  }
  if (res.set) doc["set"] = descriptor_json(*res.set);
  if (res.r) doc["r"] = *res.r;
  json rep = json::object();
  const auto& r = res.report;
  rep["degrees"] = r.degrees;
  rep["angles"] = r.angles;
  if (r.min_angle) rep["min_angle"] = *r.min_angle;
  if (r.segment_count) rep["segment_count"] = *r.segment_count;
  if (r.segment_bound) rep["segment_bound"] = *r.segment_bound;
  if (r.cominimal_count) rep["cominimal_count"] = *r.cominimal_count;
  if (r.coverage) rep["coverage"] = {{"max_defect", r.coverage->max_defect}, {"covered", r.coverage->covered}};
  json en = json::array();
  for (const auto& e : r.energetic) en.push_back({{"x", point_json(e.x)}, {"witness", point_json(e.witness)}});
  rep["energetic"] = std::move(en);
  doc["report"] = std::move(rep);
  doc["meta"] = {{"solver", res.meta.solver},
                 {"iterations", res.meta.iterations},
                 {"converged", res.meta.converged},
                 {"tol", tol_json(res.meta.tol)}};
  return dump(doc);
}

ResultFile make_steiner_result(const InstanceFile& inst, const EmbeddedTree& tree,
                               const ToleranceConfig& tol, std::string solver,
                               std::optional<int> cominimal_count) {
  ResultFile res;
  res.instance_digest = instance_digest(inst);
  res.problem = ProblemKind::steiner;
  res.length = tree.length;
  res.network = tree.graph();
  res.n_terminals = tree.topology.n_terminals;
  res.topology = tree.topology;
  res.report.degrees = degrees_of(res.network);
  if (!tree.topology.edges.empty()) fill_angles(res.report, contract_degenerate(tree, tol));
  res.report.cominimal_count = cominimal_count;
  res.meta = SolverMeta{std::move(solver), tree.iterations, tree.converged, tol};
  return res;
}

ResultFile make_mdm_result(const InstanceFile& inst, const MdmNetwork& net,
                           std::span<const Point> m_samples, const ToleranceConfig& tol,
                           std::string solver, int iterations, bool converged) {
  if (!inst.set || !inst.r) throw std::invalid_argument("make_mdm_result: not an mdm instance");
  ResultFile res;
  res.instance_digest = instance_digest(inst);
  res.problem = ProblemKind::mdm;
  res.length = net.length();
  res.network = net;
  res.set = inst.set;
  res.r = inst.r;
  res.report.degrees = degrees_of(net);
  const int m_count = std::holds_alternative<FinitePoints>(*inst.set)
                          ? static_cast<int>(std::get<FinitePoints>(*inst.set).points.size())
                          : 0;
  const auto rep = verify_mdm(net, m_count, tol);
  res.report.angles = rep.angles;
  res.report.min_angle = rep.min_angle;
  res.report.segment_count = rep.segment_count;
  res.report.segment_bound = rep.segment_bound;
  const auto cov = coverage_check(net, m_samples, *inst.r, tol);
  res.report.coverage = ResultCoverage{cov.max_defect, cov.covered};
  res.report.energetic = energetic_points(net, m_samples, *inst.r, tol);
  res.meta = SolverMeta{std::move(solver), iterations, converged, tol};
  return res;
}

ToleranceConfig tolerance_profile(std::string_view name) {
  ToleranceConfig t;
  if (name == "default") return t;
  if (name == "strict") return ToleranceConfig{1e-12, 1e-7, 1e-9, 1e-8};
  if (name == "loose") return ToleranceConfig{1e-8, 1e-4, 1e-5, 1e-4};
  throw std::invalid_argument("unknown tolerance profile '" + std::string(name) + "'");
}

}  // namespace steinerlab

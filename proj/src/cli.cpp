#include "steinerlab/cli.hpp"
#include "steinerlab/experiments.hpp"
#include "steinerlab/io.hpp"
#include "steinerlab/mdm.hpp"
#include "steinerlab/mst_ratio.hpp"
#include "steinerlab/svg.hpp"

#include "format.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace steinerlab {
namespace {

// Error carrying its exit code and, for validation failures, the field.
struct CliError {
  int code;
  std::string kind;
  std::string message;
  std::string field;
};

[[noreturn]] void validation(const std::string& message, const std::string& field = "") {
  throw CliError{kExitValidation, "validation", message, field};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) validation("cannot read '" + path + "'", "--in");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream o(path, std::ios::binary);
  if (!o) validation("cannot write '" + path + "'", "--out");
  o << data;
  if (!o) validation("cannot write '" + path + "'", "--out");
}

struct Common {
  std::string in;
  std::string out;
  std::string svg;
  std::string csv;
  std::string tol_profile;
  std::uint64_t seed = 1;
  std::size_t density = 0;
  int nmax = kDefaultNMax;

  ToleranceConfig tol() const {
    std::string name = tol_profile;
    if (name.empty()) {
      const char* env = std::getenv("STEINERLAB_TOL_PROFILE");
      name = env && *env ? env : "default";
    }
    try {
      return tolerance_profile(name);
    } catch (const std::invalid_argument& e) {
      validation(e.what(), "--tol");
    }
  }
};

void emit_result(const Common& c, const ResultFile& res, std::ostream& out) {
  const std::string text = serialize_result(res);
  if (c.out.empty()) {
    out << text;
  } else {
    write_file(c.out, text);
    out << "length " << detail::fmt_double(res.length) << '\n';
  }
  if (!c.svg.empty()) {
    SvgOptions opt;
    opt.project = true;
    write_file(c.svg, render_svg(res, opt).svg);
  }
}

InstanceFile load_instance(const Common& c, ProblemKind expected) {
  if (c.in.empty()) validation("missing instance file", "--in");
  InstanceFile inst;
  try {
    inst = parse_instance(read_file(c.in));
  } catch (const FormatError& e) {
    validation(e.what(), e.field());
  }
  if (inst.problem != expected) {
    validation("instance problem is '" + std::string(problem_name(inst.problem)) + "'", "problem");
  }
  return inst;
}

int steiner_solve(const Common& c, const std::string& solver, std::ostream& out) {
  const auto inst = load_instance(c, ProblemKind::steiner);
  const auto tol = c.tol();
  const auto& pts = inst.terminals;
  EmbeddedTree tree;
  std::optional<int> cominimal;
  if (pts.size() == 1) {
    tree.terminals = pts;
    tree.topology.n_terminals = 1;
  } else if (solver == "exact") {
    if (static_cast<int>(pts.size()) > c.nmax) {
      validation("exact solver needs at most " + std::to_string(c.nmax) + " terminals", "terminals");
    }
    auto sol = solve_exact(pts, tol, c.nmax);
    tree = std::move(sol.best);
    tree.converged = sol.unconverged.empty();
    cominimal = static_cast<int>(sol.cominimal.size());
  } else if (solver == "heuristic") {
    tree = heuristic_steiner(pts, tol);
  } else {
    validation("unknown solver '" + solver + "'", "--solver");
  }
  const auto res = make_steiner_result(inst, tree, tol, solver, cominimal);
  emit_result(c, res, out);
  return tree.converged ? kExitOk : kExitNotConverged;
}

int steiner_ratio_cmd(const Common& c, int sausage_d, int from, int to, std::ostream& out) {
  const auto tol = c.tol();
  if (sausage_d > 0) {
    if (sausage_d != 2 && sausage_d != 3) validation("sausage dimension must be 2 or 3", "--sausage");
    if (from < 2 || to < from) validation("need 2 <= from <= to", "--from");
    const auto rows = sausage_scan(static_cast<std::size_t>(sausage_d), from, to, tol, c.nmax);
    std::ostringstream s;
    write_ratio_csv(s, rows);
    if (c.csv.empty()) {
      out << s.str();
    } else {
      write_file(c.csv, s.str());
    }
    return kExitOk;
  }
  const auto inst = load_instance(c, ProblemKind::steiner);
  if (static_cast<int>(inst.terminals.size()) > c.nmax) {
    validation("ratio needs at most " + std::to_string(c.nmax) + " terminals", "terminals");
  }
  out << detail::fmt_double(steiner_ratio(inst.terminals, tol, c.nmax)) << '\n';
  return kExitOk;
}

MdmNetwork polygon_init(const Polygon& poly, double r) {
  const Point c = centroid(poly.vertices);
  MdmNetwork net;
  for (const auto& v : poly.vertices) {
    const double d = distance(v, c);
    net.vertices.push_back(d > r ? v + (c - v) * (r / d) : c);
    const int n = static_cast<int>(net.vertices.size());
    if (n >= 2) net.edges.push_back({n - 2, n - 1});
  }
  return net;
}

MdmNetwork tree_init(const std::vector<Point>& pts) {
  MdmNetwork net;
  net.vertices = pts;
  if (pts.size() >= 2) net.edges = mst(pts).edges;
  return net;
}

int mdm_solve(const Common& c, std::ostream& out) {
  const auto inst = load_instance(c, ProblemKind::mdm);
  const auto tol = c.tol();
  const double r = *inst.r;
  const auto& desc = *inst.set;
  std::vector<Point> samples;
  if (const auto* f = std::get_if<FinitePoints>(&desc)) {
    if (static_cast<int>(f->points.size()) > c.nmax) {
      validation("finite solver needs at most " + std::to_string(c.nmax) + " points", "terminals");
    }
    const auto sol = solve_mdm_finite(f->points, r, tol, c.nmax);
    const auto res = make_mdm_result(inst, sol.network, f->points, tol, "finite",
                                     static_cast<int>(sol.relaxed), sol.converged);
    emit_result(c, res, out);
    return sol.converged ? kExitOk : kExitNotConverged;
  }
  MdmNetwork init;
  if (const auto* circle = std::get_if<Circle>(&desc)) {
    init = circle->R > r ? horseshoe_circle(circle->R, r, tol).network
                         : MdmNetwork{{Point{0.0, 0.0}}, {}};
  } else if (const auto* st = std::get_if<Stadium>(&desc)) {
    if (st->R > r) {
      init = horseshoe_stadium(st->R, r, st->seg_len, tol).network;
    } else {
      init.vertices = {Point{-st->seg_len / 2, 0.0}, Point{st->seg_len / 2, 0.0}};
      init.edges = {{0, 1}};
    }
  } else if (const auto* poly = std::get_if<Polygon>(&desc)) {
    init = polygon_init(*poly, r);
  } else {
    init = tree_init(std::get<Samples>(desc).points);
  }
  NumericConfig cfg;
  cfg.tol = tol;
  cfg.density = c.density;
  const auto sol = solve_mdm_numeric(desc, r, init, cfg);
  samples = std::holds_alternative<Samples>(desc)
                ? std::get<Samples>(desc).points
                : sample_compact(desc, 40 * default_density(desc, r));
  const auto res = make_mdm_result(inst, sol.network, samples, tol, "numeric", sol.iterations, sol.feasible);
  emit_result(c, res, out);
  return sol.feasible ? kExitOk : kExitNotConverged;
}

InstanceFile stadium_instance(double R, double r, double seg_len) {
  InstanceFile inst;
  inst.problem = ProblemKind::mdm;
  inst.set = seg_len > 0.0 ? CompactSetDescriptor{Stadium{R, seg_len}} : CompactSetDescriptor{Circle{R}};
  inst.r = r;
  return inst;
}

int mdm_construction(const Common& c, bool competitor, double R, double r, double seg_len,
                     std::ostream& out) {
  const auto tol = c.tol();
  if (!(r > 0.0)) validation("must be > 0", "--r");
  if (!(R > r)) validation("need R > r", "--R");
  if (!(seg_len >= 0.0)) validation("must be >= 0", "--seg-len");
  const auto inst = stadium_instance(R, r, seg_len);
  const auto samples = sample_compact(*inst.set, 40 * default_density(*inst.set, r));
  if (competitor) {
    const auto sol = stadium_competitor(R, r, seg_len, tol);
    emit_result(c, make_mdm_result(inst, sol.network, samples, tol, "competitor", sol.iterations, sol.feasible),
                out);
    return sol.feasible ? kExitOk : kExitNotConverged;
  }
  const auto hs = horseshoe_stadium(R, r, seg_len, tol);
  emit_result(c, make_mdm_result(inst, hs.network, samples, tol, "horseshoe", 0, hs.coverage.covered), out);
  return hs.coverage.covered ? kExitOk : kExitNotConverged;
}

int exp_run(const Common& c, bool no_timing, bool seed_given, std::ostream& out, std::ostream& err) {
  if (c.in.empty()) validation("missing suite file", "--in");
  SuiteSpec spec;
  try {
    spec = parse_suite_spec(read_file(c.in));
  } catch (const std::invalid_argument& e) {
    validation(e.what(), "--in");
  }
  spec.tol = c.tol();
  if (c.nmax != kDefaultNMax) spec.n_max = c.nmax;
  if (seed_given) {
    for (auto& e : spec.entries) e.seed = c.seed;
  }
  const auto rows = run_suite(spec);
  std::ostringstream s;
  write_suite_csv(s, rows, !no_timing);
  if (c.csv.empty()) {
    out << s.str();
  } else {
    write_file(c.csv, s.str());
  }
  int failed = 0;
  for (const auto& r : rows) failed += r.error ? 1 : 0;
  if (failed > 0) {
    err << nlohmann::json{{"warning", "rows_failed"}, {"count", failed}}.dump() << '\n';
  }
  return kExitOk;
}

int render_cmd(const Common& c, bool project, std::ostream& out, std::ostream& err) {
  if (c.in.empty()) validation("missing result file", "--in");
  ResultFile res;
  try {
    res = parse_result(read_file(c.in));
  } catch (const FormatError& e) {
    validation(e.what(), e.field());
  }
  SvgOptions opt;
  opt.project = project;
  SvgOutput svg;
  try {
    svg = render_svg(res, opt);
  } catch (const UnsupportedDimension& e) {
    validation(e.what(), "--project");
  }
  for (const auto& w : svg.warnings) err << nlohmann::json{{"warning", w}}.dump() << '\n';
  if (c.out.empty()) {
    out << svg.svg;
  } else {
    write_file(c.out, svg.svg);
  }
  return kExitOk;
}

void report_error(std::ostream& err, const CliError& e) {
  nlohmann::json j{{"error", e.kind}, {"code", e.code}, {"message", e.message}};
  if (!e.field.empty()) j["field"] = e.field;
  err << j.dump() << '\n';
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steiner trees and maximal distance minimizers", "steinerlab"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", c.tol_profile, "Tolerance profile: default, strict or loose");
  };
  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--in", c.in, "Input file");
    sub->add_option("--out", c.out, "Output file (stdout when omitted)");
  };

  auto* steiner = app.add_subcommand("steiner", "Euclidean Steiner trees");
  steiner->require_subcommand(1);
  std::string solver = "exact";
  auto* s_solve = steiner->add_subcommand("solve", "Solve a Steiner instance");
  add_io(s_solve);
  add_common(s_solve);
  s_solve->add_option("--nmax", c.nmax, "Largest terminal count for exhaustion");
  s_solve->add_option("--solver", solver, "exact or heuristic");
  s_solve->add_option("--svg", c.svg, "Also render the result to this SVG file");
  int count_n = 0;
  auto* s_count = steiner->add_subcommand("count", "Number of full Steiner topologies");
  s_count->add_option("--n", count_n, "Terminal count")->required();
  int sausage_d = 0, from = 4, to = 7;
  auto* s_ratio = steiner->add_subcommand("ratio", "Steiner ratio of an instance or a sausage scan");
  s_ratio->add_option("--in", c.in, "Steiner instance file");
  s_ratio->add_option("--sausage", sausage_d, "Sausage dimension (2 or 3)");
  s_ratio->add_option("--from", from, "First sausage size");
  s_ratio->add_option("--to", to, "Last sausage size");
  s_ratio->add_option("--csv", c.csv, "CSV output file");
  s_ratio->add_option("--nmax", c.nmax, "Largest terminal count for exhaustion");
  add_common(s_ratio);

  auto* mdm = app.add_subcommand("mdm", "Maximal distance minimizers");
  mdm->require_subcommand(1);
  auto* m_solve = mdm->add_subcommand("solve", "Solve an MDM instance");
  add_io(m_solve);
  add_common(m_solve);
  m_solve->add_option("--density", c.density, "Working sample count (0 = automatic)");
  m_solve->add_option("--nmax", c.nmax, "Largest point count for the finite solver");
  m_solve->add_option("--svg", c.svg, "Also render the result to this SVG file");
  double R = 0.0, r = 0.0, seg_len = 0.0;
  auto* m_horse = mdm->add_subcommand("horseshoe", "Horseshoe for a circle or stadium");
  auto* m_comp = mdm->add_subcommand("competitor", "Branched competitor for a stadium");
  for (auto* sub : {m_horse, m_comp}) {
    sub->add_option("--R", R, "Radius of the circle or stadium")->required();
    sub->add_option("--r", r, "Covering radius")->required();
    sub->add_option("--seg-len", seg_len, "Stadium segment length (0 = circle)");
    sub->add_option("--out", c.out, "Output file (stdout when omitted)");
    sub->add_option("--svg", c.svg, "Also render the result to this SVG file");
    add_common(sub);
  }

  auto* exp = app.add_subcommand("exp", "Experiment suites");
  exp->require_subcommand(1);
  bool no_timing = false;
  auto* e_run = exp->add_subcommand("run", "Run a JSON suite and write CSV");
  e_run->add_option("--in", c.in, "Suite file")->required();
  e_run->add_option("--csv", c.csv, "CSV output file (stdout when omitted)");
  auto* seed_opt = e_run->add_option("--seed", c.seed, "Override the seed of every entry");
  e_run->add_option("--nmax", c.nmax, "Largest terminal count for exact rows");
  e_run->add_flag("--no-timing", no_timing, "Write wall_time_ms as 0");
  add_common(e_run);

  bool project = false;
  auto* render = app.add_subcommand("render", "Render a result file to SVG");
  add_io(render);
  render->add_flag("--project", project, "Project d > 2 results onto the first two axes");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, CliError{kExitUsage, "usage", e.what(), ""});
    out << app.help("", CLI::AppFormatMode::All);
    return kExitUsage;
  }

  try {
    if (s_solve->parsed()) return steiner_solve(c, solver, out);
    if (s_count->parsed()) {
      if (count_n < 2) validation("must be >= 2", "--n");
      out << count_full_topologies(count_n) << '\n';
      return kExitOk;
    }
    if (s_ratio->parsed()) return steiner_ratio_cmd(c, sausage_d, from, to, out);
    if (m_solve->parsed()) return mdm_solve(c, out);
    if (m_horse->parsed()) return mdm_construction(c, false, R, r, seg_len, out);
    if (m_comp->parsed()) return mdm_construction(c, true, R, r, seg_len, out);
    if (e_run->parsed()) return exp_run(c, no_timing, seed_opt->count() > 0, out, err);
    if (render->parsed()) return render_cmd(c, project, out, err);
  } catch (const CliError& e) {
    report_error(err, e);
    return e.code;
  } catch (const std::exception& e) {
    report_error(err, CliError{kExitValidation, "validation", e.what(), ""});
    return kExitValidation;
  }
  report_error(err, CliError{kExitUsage, "usage", "no command given", ""});
  return kExitUsage;
}

}  // namespace steinerlab

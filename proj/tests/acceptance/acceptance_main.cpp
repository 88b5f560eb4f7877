// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include "steinerlab/experiments.hpp"
#include "steinerlab/mdm.hpp"
#include "steinerlab/mst_ratio.hpp"
#include "steinerlab/steiner_solver.hpp"
#include "steinerlab/topology.hpp"
#include "support/fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace steinerlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Every Steiner tree built by criteria 2-12, checked by criterion 13.
std::vector<EmbeddedTree> g_trees;

void keep(const EmbeddedTree& t) { g_trees.push_back(t); }

Outcome topology_counts() {
  const long long expected[] = {1, 3, 15, 105, 945};
  Outcome o{true, "sizes"};
  for (int n = 3; n <= 7; ++n) {
    const auto size = enumerate_full_topologies(n).size();
    o.detail += " " + std::to_string(size);
    if (static_cast<long long>(size) != expected[n - 3] || count_full_topologies(n) != expected[n - 3]) {
      o.pass = false;
    }
  }
  return o;
}

Outcome triangle_ratio() {
  std::vector<Point> tri{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
  ToleranceConfig tol;
  keep(solve_exact(tri, tol).best);
  const double rho = steiner_ratio(tri, tol);
  return {std::abs(rho - 0.8660254) <= 1e-7, "ratio " + fmt("%.9f", rho)};
}

Outcome square() {
  std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto sol = solve_exact(sq, {});
  keep(sol.best);
  const bool ok = std::abs(sol.best.length - (1 + std::sqrt(3.0))) <= 1e-6 && sol.cominimal.size() == 2;
  return {ok, "length " + fmt("%.9f", sol.best.length) + ", co-minimal " + std::to_string(sol.cominimal.size())};
}

Outcome tripod_law() {
  ToleranceConfig tol;
  int converged = 0, violations = 0;
  double worst = 10.0;
  for (int k = 0; k < 200; ++k) {
    auto pts = random_instance(static_cast<std::size_t>(3 + k % 4), 1000 + k);
    auto sol = solve_exact(pts, tol);
    keep(sol.best);
    if (!sol.best.converged || !sol.unconverged.empty()) continue;
    ++converged;
    auto rep = verify_tree(sol.best, tol);
    if (!rep.min_angle) continue;
    worst = std::min(worst, *rep.min_angle);
    if (*rep.min_angle < kTwoPiOverThree - 1e-5) ++violations;
  }
  return {violations == 0 && converged > 0, std::to_string(converged) + " converged, " +
                                                std::to_string(violations) + " violations, min angle " +
                                                fmt("%.8f", worst)};
}

Outcome simplex_and_sausage() {
  ToleranceConfig tol;
  auto tet = simplex_points(3);
  keep(solve_exact(tet, tol).best);
  const double rho_tet = steiner_ratio(tet, tol);
  bool ok = rho_tet < 0.8660254;
  std::string detail = "tetrahedron " + fmt("%.7f", rho_tet) + "; sausage";
  double prev = 10.0;
  for (int n = 4; n <= 7; ++n) {
    auto pts = sausage_points(3, n);
    auto tree = relax_topology(pts, caterpillar_topology(n), tol);
    keep(tree);
    const double rho = tree.length / mst(pts).length;
    detail += " " + fmt("%.7f", rho);
    if (!(rho < prev) || !(rho > 0.774)) ok = false;
    prev = rho;
  }
  return {ok, detail};
}

Outcome horseshoe_regime() {
  const double R = 6.0, r = 1.0;
  ToleranceConfig tol;
  auto h = horseshoe_circle(R, r, tol);
  auto init = horseshoe_network(R, r, 0.0, h.phi, 2 * kPi / 96);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : init.vertices) {
    v[0] += 0.1 * r * u(rng);
    v[1] += 0.1 * r * u(rng);
  }
  auto res = solve_mdm_numeric(Circle{R}, r, init);
  const double rel = std::abs(res.length / h.length - 1.0);
  const bool ok = res.feasible && rel <= 0.01 && h.coverage.covered && h.coverage.max_defect <= 1e-6 * R;
  return {ok, "numeric " + fmt("%.6f", res.length) + " vs horseshoe " + fmt("%.6f", h.length) +
                  " (rel " + fmt("%.2e", rel) + "), horseshoe defect " + fmt("%.1e", h.coverage.max_defect)};
}

Outcome stadium_competitor_check() {
  const double r = 1.0;
  ToleranceConfig tol;
  auto h = horseshoe_stadium(1.5 * r, r, 2 * r, tol);
  auto c = stadium_competitor(1.5 * r, r, 2 * r, tol);
  const double margin = h.length - c.length;
  return {c.feasible && margin > 1e-4 * r,
          "competitor " + fmt("%.6f", c.length) + " vs horseshoe " + fmt("%.6f", h.length) + ", margin " +
              fmt("%.4f", margin)};
}

Outcome finite_bound() {
  ToleranceConfig tol;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 5;
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back(Point{u(rng), u(rng)});
    double mind = 1e9;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) mind = std::min(mind, distance(pts[i], pts[j]));
    // Disjoint balls: 2r < minimum separation.
    const double r = 0.2 * mind;
    auto s = solve_mdm_finite(pts, r, tol);
    auto rep = verify_mdm(s.network, n, tol);
    auto cov = coverage_check(s.network, pts, r, tol);
    if (!rep.bound_ok() || !cov.covered) ++bad;
  }
  return {bad == 0, "100 instances, " + std::to_string(bad) + " failures"};
}

Outcome crossing_fixture() {
  auto t = fixtures::six_crossing_tree();
  keep(t);
  auto c = count_crossings(t, Point{0, 0}, 2.0, 0.5);
  return {c.count == 6 && !c.degenerate, "crossings " + std::to_string(c.count)};
}

double g_random_1024 = 0.0;

Outcome random_asymptotics() {
  ToleranceConfig tol;
  std::vector<SizeSample> means;
  std::string detail;
  for (int n : {128, 256, 512, 1024, 2048, 4096}) {
    double sum = 0.0;
    for (int rep = 0; rep < 32; ++rep) {
      auto tree = heuristic_steiner(random_instance(static_cast<std::size_t>(n), 7919u * n + rep), tol);
      sum += tree.length;
      keep(tree);
    }
    means.push_back({static_cast<double>(n), sum / 32});
    if (n == 1024) g_random_1024 = sum / 32 / std::sqrt(1024.0);
  }
  auto fit = fit_power_law(means);
  const bool ok = fit.exponent >= 0.45 && fit.exponent <= 0.55 && fit.r_squared > 0.99;
  return {ok, "exponent " + fmt("%.4f", fit.exponent) + ", beta " + fmt("%.4f", fit.beta) + ", r2 " +
                  fmt("%.6f", fit.r_squared)};
}

Outcome lattice_flavor() {
  ToleranceConfig tol;
  auto pts = hex_lattice_instance(1024);
  const int n = static_cast<int>(pts.size());
  auto tree = heuristic_steiner(pts, tol);
  keep(tree);
  const double hex = tree.length / normalization_divisor("hex_lattice", n, 2);
  const bool ordered = hex > g_random_1024;
  const bool in_band = hex >= 1.0 && hex <= 1.20;
  return {ordered && in_band, "hex N=" + std::to_string(n) + " normalized " + fmt("%.4f", hex) +
                                  ", random " + fmt("%.4f", g_random_1024) + ", ordering " +
                                  (ordered ? "ok" : "violated") + ", band " + (in_band ? "ok" : "violated")};
}

Outcome zigzag_trend() {
  ToleranceConfig tol;
  bool ok = true;
  double prev = 1e9;
  std::string detail = "normalized";
  for (int n = 3; n <= 7; ++n) {
    auto sol = solve_exact(zigzag_instance(n), tol);
    keep(sol.best);
    const double v = sol.best.length / normalization_divisor("zigzag", n, 2);
    detail += " " + fmt("%.7f", v);
    if (v > prev || v < 1.0 - 1e-9) ok = false;
    prev = v;
  }
  return {ok, detail};
}

Outcome bound_harness() {
  ToleranceConfig tol;
  long probes = 0, violations = 0;
  double max_branch_frac = 0.0, max_len_frac = 0.0;
  for (const auto& tree : g_trees) {
    const std::size_t d = tree.terminals.front().dim();
    const auto g = tree.graph();
    // Probe centres: Steiner points and edge midpoints, at most 24 per tree.
    std::vector<Point> centres;
    for (const auto& s : tree.steiner_points) centres.push_back(s);
    for (auto [a, b] : g.edges) centres.push_back(lerp(g.vertices[a], g.vertices[b], 0.5));
    const std::size_t stride = std::max<std::size_t>(1, centres.size() / 24);
    for (std::size_t i = 0; i < centres.size(); i += stride) {
      const Point& x = centres[i];
      // Largest ball about x with no terminal inside.
      double r = std::numeric_limits<double>::infinity();
      for (const auto& t : tree.terminals) r = std::min(r, distance(t, x));
      if (!(r > 0.0)) continue;
      for (double t : {0.25, 0.5, 0.75}) {
        ++probes;
        const int branching = count_branching_in_ball(tree, x, r, t, tol);
        const double bb = branching_bound(d, t);
        max_branch_frac = std::max(max_branch_frac, branching / bb);
        if (branching > bb) ++violations;
        // The length bound is stated for d > 2 only.
        if (d > 2) {
          const double ratio = length_in_ball(tree, x, r, t) / r;
          const double lb = length_ratio_bound(d, t);
          max_len_frac = std::max(max_len_frac, ratio / lb);
          if (ratio > lb) ++violations;
        }
      }
    }
  }
  return {violations == 0 && probes > 0,
          std::to_string(g_trees.size()) + " trees, " + std::to_string(probes) + " probes, " +
              std::to_string(violations) + " violations, max fraction of bound: branching " +
              fmt("%.4f", max_branch_frac) + ", length " + fmt("%.4f", max_len_frac)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "topology counts", 5, topology_counts},
      {2, "equilateral triangle ratio", 1, triangle_ratio},
      {3, "unit square non-uniqueness", 1, square},
      {4, "tripod angle law", 120, tripod_law},
      {5, "simplex and 3-sausage ratios", 120, simplex_and_sausage},
      {6, "horseshoe regime R = 6r", 120, horseshoe_regime},
      {7, "stadium competitor R = 1.5r", 120, stadium_competitor_check},
      {8, "finite set segment bound", 300, finite_bound},
      {9, "six-crossing fixture", 1, crossing_fixture},
      {10, "random asymptotics", 600, random_asymptotics},
      {11, "hexagonal lattice flavor", 600, lattice_flavor},
      {12, "zigzag trend", 300, zigzag_trend},
      {13, "bound sanity harness", 60, bound_harness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s  %2d  %-30s %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

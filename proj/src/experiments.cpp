#include "steinerlab/experiments.hpp"
#include "steinerlab/mst_ratio.hpp"

#include "format.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <ostream>
#include <stdexcept>

namespace steinerlab {
namespace {

constexpr double kSqrt3 = 1.7320508075688772;

bool inside_polygon(const std::vector<Point>& poly, double x, double y) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const double xi = poly[i][0], yi = poly[i][1];
    const double xj = poly[j][0], yj = poly[j][1];
    if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) in = !in;
  }
  return in;
}

// Lattice rows y = j h sqrt3/2 with odd rows shifted by h/2.
template <class F>
void for_each_lattice_point(double h, F f) {
  const double slack = 1e-12;
  const double dy = h * kSqrt3 / 2;
  for (int j = 0; j * dy <= 1.0 + slack; ++j) {
    const double off = (j % 2) ? h / 2 : 0.0;
    for (int i = 0; off + i * h <= 1.0 + slack; ++i) f(off + i * h, j * dy);
  }
}

int lattice_count(double h) {
  int c = 0;
  for_each_lattice_point(h, [&](double, double) { ++c; });
  return c;
}

// Greedy Steiner insertion on a spanning tree. Every accepted move shortens
// the tree by more than `gain_eps`, so the loop terminates.
class Heuristic {
 public:
  Heuristic(std::span<const Point> points, const ToleranceConfig& tol)
      : pos_(points.begin(), points.end()),
        adj_(points.size()),
        steiner_(points.size(), 0),
        alive_(points.size(), 1),
        tol_(tol),
        n_(static_cast<int>(points.size())) {
    gain_eps_ = tol.eps_len * std::max(bounding_extent(), 1e-300);
    for (auto [a, b] : mst(points).edges) link(a, b);
  }

  void run() {
    for (int v = 0; v < n_; ++v) enqueue(v);
    while (!queue_.empty()) {
      const int v = queue_.front();
      queue_.pop_front();
      queued_[v] = 0;
      if (!alive_[v]) continue;
      if (steiner_[v]) {
        if (relax_steiner(v)) continue;
      }
      insert_at(v);
    }
  }

  EmbeddedTree result() const {
    EmbeddedTree tree;
    tree.terminals.assign(pos_.begin(), pos_.begin() + n_);
    std::vector<int> id(pos_.size(), -1);
    for (int v = 0; v < n_; ++v) id[v] = v;
    int next = n_;
    for (std::size_t v = n_; v < pos_.size(); ++v) {
      if (!alive_[v]) continue;
      id[v] = next++;
      tree.steiner_points.push_back(pos_[v]);
    }
    tree.topology.n_terminals = n_;
    tree.topology.n_steiner = next - n_;
    for (std::size_t v = 0; v < pos_.size(); ++v) {
      if (!alive_[v]) continue;
      for (int w : adj_[v]) {
        if (static_cast<int>(v) < w) tree.topology.edges.push_back({id[v], id[w]});
      }
    }
    std::sort(tree.topology.edges.begin(), tree.topology.edges.end());
    tree.length = tree.recompute_length();
    tree.converged = true;
    return tree;
  }

 private:
  double bounding_extent() const {
    double ext = 0.0;
    for (std::size_t k = 0; k < pos_.front().dim(); ++k) {
      double lo = pos_.front()[k], hi = lo;
      for (const auto& p : pos_) {
        lo = std::min(lo, p[k]);
        hi = std::max(hi, p[k]);
      }
      ext = std::max(ext, hi - lo);
    }
    return ext;
  }

  void link(int a, int b) {
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }

  void unlink(int a, int b) {
    std::erase(adj_[a], b);
    std::erase(adj_[b], a);
  }

  void enqueue(int v) {
    if (static_cast<std::size_t>(v) >= queued_.size()) queued_.resize(pos_.size(), 0);
    if (queued_[v]) return;
    queued_[v] = 1;
    queue_.push_back(v);
  }

  void enqueue_around(int v) {
    enqueue(v);
    for (int w : adj_[v]) enqueue(w);
  }

  double star_length(int v, const Point& at) const {
    double s = 0.0;
    for (int w : adj_[v]) s += distance(at, pos_[w]);
    return s;
  }

  // Replaces Steiner node v by edges between its neighbours when it has
  // degree 2 or coincides with a neighbour; otherwise moves it to the Fermat
  // point. Returns true when the tree changed.
  bool relax_steiner(int v) {
    auto& nb = adj_[v];
    if (nb.size() == 2) {
      const int a = nb[0], b = nb[1];
      unlink(v, a);
      unlink(v, b);
      link(a, b);
      alive_[v] = 0;
      enqueue(a);
      enqueue(b);
      return true;
    }
    if (nb.size() != 3) return false;
    const Point f = fermat_point(pos_[nb[0]], pos_[nb[1]], pos_[nb[2]], tol_);
    for (int w : nb) {
      if (distance(f, pos_[w]) > gain_eps_) continue;
      // Merge v into w.
      const std::vector<int> others = nb;
      for (int u : others) unlink(v, u);
      for (int u : others) {
        if (u != w) link(w, u);
      }
      alive_[v] = 0;
      enqueue_around(w);
      return true;
    }
    if (star_length(v, pos_[v]) - star_length(v, f) <= gain_eps_) return false;
    pos_[v] = f;
    enqueue_around(v);
    return true;
  }

  void insert_at(int v) {
    const auto& nb = adj_[v];
    double best_gain = gain_eps_;
    int best_a = -1, best_b = -1;
    std::optional<Point> best_point;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const int a = nb[i], b = nb[j];
        if (angle_at(pos_[v], pos_[a], pos_[b]) >= kTwoPiOverThree - tol_.eps_angle) continue;
        Point s = fermat_point(pos_[v], pos_[a], pos_[b], tol_);
        const double gain = distance(pos_[v], pos_[a]) + distance(pos_[v], pos_[b]) -
                            distance(s, pos_[v]) - distance(s, pos_[a]) - distance(s, pos_[b]);
        if (gain > best_gain) {
          best_gain = gain;
          best_a = a;
          best_b = b;
          best_point = std::move(s);
        }
      }
    }
    if (!best_point) return;
    const int s = static_cast<int>(pos_.size());
    pos_.push_back(*best_point);
    adj_.emplace_back();
    steiner_.push_back(1);
    alive_.push_back(1);
    unlink(v, best_a);
    unlink(v, best_b);
    link(s, v);
    link(s, best_a);
    link(s, best_b);
    enqueue(v);
    for (int w : adj_[s]) {
      if (steiner_[w]) enqueue(w);
    }
    enqueue(s);
    enqueue(best_a);
    enqueue(best_b);
  }

  std::vector<Point> pos_;
  std::vector<std::vector<int>> adj_;
  std::vector<char> steiner_;
  std::vector<char> alive_;
  std::vector<char> queued_;
  std::deque<int> queue_;
  ToleranceConfig tol_;
  int n_;
  double gain_eps_ = 0.0;
};

std::string pad(long v, int width) {
  std::string s = std::to_string(v);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t rep) {
  // splitmix64 finaliser over the combined key.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (n * 1000003ULL + rep + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct PlannedRow {
  ExperimentRun run;
  std::vector<Point> points;
  std::optional<std::string> generator_error;
};

double solve_length(std::span<const Point> points, SolverKind solver, const SuiteSpec& spec) {
  switch (solver) {
    case SolverKind::exact:
      if (points.size() == 1) return 0.0;
      return solve_exact(points, spec.tol, spec.n_max).best.length;
    case SolverKind::heuristic:
      if (points.size() == 1) return 0.0;
      return heuristic_steiner(points, spec.tol).length;
    case SolverKind::restricted:
      if (points.size() < 3) return points.size() == 2 ? distance(points[0], points[1]) : 0.0;
      return relax_topology(points, caterpillar_topology(static_cast<int>(points.size())), spec.tol)
          .length;
  }
  return 0.0;
}

std::vector<PlannedRow> plan(const SuiteEntry& e) {
  std::vector<PlannedRow> rows;
  auto add = [&](std::string id, std::string gen, std::uint64_t seed, int n, std::size_t d,
                 auto make) {
    PlannedRow row;
    row.run.instance_id = std::move(id);
    row.run.generator = std::move(gen);
    row.run.seed = seed;
    row.run.N = n;
    row.run.d = d;
    row.run.solver = e.solver;
    try {
      row.points = make();
      row.run.N = static_cast<int>(row.points.size());
    } catch (const std::exception& ex) {
      row.generator_error = ex.what();
    }
    rows.push_back(std::move(row));
  };
  const std::string solver(solver_name(e.solver));
  if (e.generator == "random") {
    for (int n : e.sizes) {
      for (int rep = 0; rep < e.reps; ++rep) {
        const std::uint64_t seed = mix_seed(e.seed, static_cast<std::uint64_t>(n), rep);
        add("random-d" + std::to_string(e.d) + "-N" + pad(n, 6) + "-s" + std::to_string(e.seed) +
                "-r" + pad(rep, 4) + "-" + solver,
            "random(d=" + std::to_string(e.d) + ")", seed, n, e.d, [&] {
              if (n < 1) throw std::invalid_argument("random: N must be >= 1");
              return random_instance(static_cast<std::size_t>(n), seed, Box{e.d, 0.0, 1.0});
            });
      }
    }
  } else if (e.generator == "hex_lattice") {
    for (int n : e.sizes) {
      add("hex_lattice-N" + pad(n, 6) + "-" + solver, "hex_lattice", 0, n, 2,
          [&] { return hex_lattice_instance(n); });
    }
  } else if (e.generator == "zigzag") {
    for (int n : e.sizes) {
      add("zigzag-N" + pad(n, 6) + "-" + solver, "zigzag", 0, n, 2, [&] { return zigzag_instance(n); });
    }
  } else if (e.generator == "homothety") {
    for (double lambda : e.lambdas) {
      const std::string lam = detail::fmt_double(lambda);
      add("homothety-n" + pad(e.n_gon, 3) + "-K" + pad(e.K, 3) + "-l" + lam + "-" + solver,
          "homothety(n_gon=" + std::to_string(e.n_gon) + ";lambda=" + lam +
              ";K=" + std::to_string(e.K) + ")",
          0, e.n_gon * (e.K + 1), 3, [&] { return homothety_instance(e.n_gon, lambda, e.K); });
    }
  } else {
    throw std::invalid_argument("suite: unknown generator '" + e.generator + "'");
  }
  return rows;
}

std::string base_generator(std::string_view generator) {
  return std::string(generator.substr(0, generator.find('(')));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<Point> random_instance(std::size_t n, std::uint64_t seed, const Box& region) {
  if (region.d < 2) throw std::invalid_argument("random_instance: d must be >= 2");
  if (!(region.hi > region.lo)) throw std::invalid_argument("random_instance: region has zero volume");
  UniformSource rng(seed);
  std::vector<Point> out;
  out.reserve(n);
  std::vector<double> c(region.d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : c) x = region.lo + (region.hi - region.lo) * rng.next();
    out.emplace_back(c);
  }
  return out;
}

std::vector<Point> random_instance(std::size_t n, std::uint64_t seed, const Polygon& region) {
  const auto& poly = region.vertices;
  if (poly.size() < 3) throw std::invalid_argument("random_instance: polygon needs >= 3 vertices");
  double x0 = poly[0][0], x1 = x0, y0 = poly[0][1], y1 = y0;
  double area2 = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    if (p.dim() != 2) throw DimensionMismatch(p.dim(), 2);
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
    area2 += p[0] * q[1] - q[0] * p[1];
  }
  if (std::abs(area2) == 0.0) throw std::invalid_argument("random_instance: polygon has zero area");
  UniformSource rng(seed);
  std::vector<Point> out;
  out.reserve(n);
  while (out.size() < n) {
    const double x = x0 + (x1 - x0) * rng.next();
    const double y = y0 + (y1 - y0) * rng.next();
    if (inside_polygon(poly, x, y)) out.push_back(Point{x, y});
  }
  return out;
}

std::vector<Point> hex_lattice_instance(int n_target) {
  if (n_target < 3) throw std::invalid_argument("hex_lattice_instance: n_target must be >= 3");
  const double h0 = std::sqrt(2.0 / (kSqrt3 * n_target));
  double best_h = h0;
  int best_err = std::abs(lattice_count(h0) - n_target);
  for (int k = -2000; k <= 2000 && best_err > 0; ++k) {
    const double h = h0 * (1.0 + 4e-4 * k);
    const int err = std::abs(lattice_count(h) - n_target);
    if (err < best_err) {
      best_err = err;
      best_h = h;
    }
  }
  std::vector<Point> out;
  for_each_lattice_point(best_h, [&](double x, double y) { out.push_back(Point{x, y}); });
  if (std::abs(static_cast<double>(out.size()) - n_target) > 0.05 * n_target) {
    throw std::runtime_error("hex_lattice_instance: no spacing within 5% of the target count");
  }
  return out;
}

std::vector<Point> zigzag_instance(int n) {
  if (n < 2) throw std::invalid_argument("zigzag_instance: n must be >= 2");
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) out.push_back(Point{static_cast<double>(i), (i % 2) ? kSqrt3 : 0.0});
  return out;
}

std::vector<Point> homothety_instance(int n_gon, double lambda, int K) {
  if (n_gon < 3) throw std::invalid_argument("homothety_instance: n_gon must be >= 3");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("homothety_instance: lambda must lie in (0,1)");
  if (K < 0) throw std::invalid_argument("homothety_instance: K must be >= 0");
  std::vector<Point> out;
  double s = 1.0;
  for (int k = 0; k <= K; ++k) {
    for (int i = 0; i < n_gon; ++i) {
      const double a = 2.0 * kPi * i / n_gon;
      out.push_back(Point{s, s * std::cos(a), s * std::sin(a)});
    }
    s *= lambda;
  }
  return out;
}

EmbeddedTree heuristic_steiner(std::span<const Point> points, const ToleranceConfig& tol) {
  tol.validate();
  if (points.size() < 2) throw std::invalid_argument("heuristic_steiner: need at least two points");
  Heuristic h(points, tol);
  h.run();
  return h.result();
}

PowerLawFit fit_power_law(std::span<const SizeSample> rows) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (!(r.n > 0.0) || !(r.length > 0.0)) {
      throw std::invalid_argument("fit_power_law: N and length must be positive");
    }
    xs.push_back(std::log(r.n));
    ys.push_back(std::log(r.length));
  }
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw std::invalid_argument("fit_power_law: need >= 3 distinct N");
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.beta = std::exp(my - fit.exponent * mx);
  fit.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return fit;
}

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::exact: return "exact";
    case SolverKind::heuristic: return "heuristic";
    case SolverKind::restricted: return "restricted";
  }
  return "heuristic";
}

SolverKind parse_solver(std::string_view name) {
  if (name == "exact") return SolverKind::exact;
  if (name == "heuristic") return SolverKind::heuristic;
  if (name == "restricted") return SolverKind::restricted;
  throw std::invalid_argument("solver: unknown solver '" + std::string(name) + "'");
}

SuiteSpec parse_suite_spec(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("suite: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("suite: top level must be an object");
  SuiteSpec spec;
  auto field = [](const json& obj, const char* key, auto& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
      obj.at(key).get_to(out);
    } catch (const json::exception&) {
      throw std::invalid_argument("suite: field '" + where + key + "' has the wrong type");
    }
  };
  field(doc, "n_max", spec.n_max, "");
  if (!doc.contains("entries")) return spec;
  if (!doc["entries"].is_array()) throw std::invalid_argument("suite: field 'entries' must be an array");
  for (std::size_t i = 0; i < doc["entries"].size(); ++i) {
    const json& e = doc["entries"][i];
    const std::string where = "entries[" + std::to_string(i) + "].";
    if (!e.is_object()) throw std::invalid_argument("suite: field '" + where + "' must be an object");
    SuiteEntry entry;
    if (!e.contains("generator")) throw std::invalid_argument("suite: missing field '" + where + "generator'");
    field(e, "generator", entry.generator, where);
    field(e, "sizes", entry.sizes, where);
    field(e, "d", entry.d, where);
    field(e, "reps", entry.reps, where);
    field(e, "seed", entry.seed, where);
    field(e, "n_gon", entry.n_gon, where);
    field(e, "lambdas", entry.lambdas, where);
    field(e, "K", entry.K, where);
    if (e.contains("solver")) {
      std::string s;
      field(e, "solver", s, where);
      try {
        entry.solver = parse_solver(s);
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument("suite: field '" + where + "solver' is not a known solver");
      }
    }
    const auto& g = entry.generator;
    if (g != "random" && g != "hex_lattice" && g != "zigzag" && g != "homothety") {
      throw std::invalid_argument("suite: field '" + where + "generator' is not a known generator");
    }
    if (entry.reps < 1) throw std::invalid_argument("suite: field '" + where + "reps' must be >= 1");
    if (entry.d < 2) throw std::invalid_argument("suite: field '" + where + "d' must be >= 2");
    spec.entries.push_back(std::move(entry));
  }
  return spec;
}

double normalization_divisor(std::string_view generator, int n, std::size_t d) {
  const std::string g = base_generator(generator);
  if (g == "hex_lattice") return std::sqrt(static_cast<double>(n));  // unit square
  if (g == "zigzag") return kSqrt3 * (n - 1);
  return std::pow(static_cast<double>(n), (static_cast<double>(d) - 1.0) / static_cast<double>(d));
}

std::vector<ExperimentRun> run_suite(const SuiteSpec& spec) {
  spec.tol.validate();
  std::vector<ExperimentRun> out;
  for (const auto& entry : spec.entries) {
    for (auto& row : plan(entry)) {
      ExperimentRun run = std::move(row.run);
      const std::string g = base_generator(run.generator);
      run.normalization = g == "hex_lattice" ? "sqrt(N*area)"
                          : g == "zigzag"    ? "sqrt3*(N-1)"
                                             : "N^((d-1)/d)";
      if (row.generator_error) {
        run.error = *row.generator_error;
        out.push_back(std::move(run));
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      try {
        run.length = solve_length(row.points, run.solver, spec);
        const double div = normalization_divisor(run.generator, run.N, run.d);
        run.normalized = div > 0.0 ? run.length / div : 0.0;
      } catch (const std::exception& ex) {
        run.error = ex.what();
      }
      run.wall_time_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      out.push_back(std::move(run));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ExperimentRun& a, const ExperimentRun& b) {
    return a.instance_id < b.instance_id;
  });
  return out;
}

void write_suite_csv(std::ostream& out, std::span<const ExperimentRun> rows, bool timing) {
  out << "instance_id,generator,seed,N,d,solver,length,normalized,wall_time_ms,normalization,error\n";
  for (const auto& r : rows) {
    out << csv_field(r.instance_id) << ',' << csv_field(r.generator) << ',' << r.seed << ',' << r.N
        << ',' << r.d << ',' << solver_name(r.solver) << ',';
    if (r.error) {
      out << ",,";
    } else {
      out << detail::fmt_double(r.length) << ',' << detail::fmt_double(r.normalized) << ',';
    }
    out << (timing ? detail::fmt_fixed(r.wall_time_ms, 3) : std::string("0")) << ','
        << csv_field(r.normalization) << ',' << csv_field(r.error.value_or("")) << '\n';
  }
}

std::vector<SizeSummary> summarize_by_size(std::span<const ExperimentRun> rows) {
  std::map<int, std::vector<const ExperimentRun*>> groups;
  for (const auto& r : rows) {
    if (!r.error) groups[r.N].push_back(&r);
  }
  std::vector<SizeSummary> out;
  for (const auto& [n, group] : groups) {
    SizeSummary s;
    s.N = n;
    s.count = static_cast<int>(group.size());
    for (const auto* r : group) {
      s.mean += r->length;
      s.mean_normalized += r->normalized;
    }
    s.mean /= s.count;
    s.mean_normalized /= s.count;
    if (s.count > 1) {
      double ss = 0.0;
      for (const auto* r : group) ss += (r->length - s.mean) * (r->length - s.mean);
      s.std_error = std::sqrt(ss / (s.count - 1) / s.count);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace steinerlab

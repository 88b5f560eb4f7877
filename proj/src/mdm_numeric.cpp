#include "steinerlab/mdm.hpp"
#include "steinerlab/steiner_solver.hpp"

#include "mdm_internal.hpp"

#include <ceres/ceres.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace steinerlab {
namespace {

// length(net) + mu * sum_m max(0, dist(m, net) - r_eff)^2 over flat
// vertex coordinates; edges fixed.
class PenaltyObjective final : public ceres::FirstOrderFunction {
 public:
  PenaltyObjective(const std::vector<Edge>& edges, const std::vector<Point>& samples,
                   std::size_t n_vertices, std::size_t dim, double mu, double r_eff)
      : edges_(edges), n_(n_vertices), d_(dim), mu_(mu), r_eff_(r_eff) {
    flat_samples_.reserve(samples.size() * dim);
    for (const auto& s : samples) {
      for (std::size_t k = 0; k < dim; ++k) flat_samples_.push_back(s[k]);
    }
  }

  int NumParameters() const override { return static_cast<int>(n_ * d_); }

  bool Evaluate(const double* x, double* cost, double* grad) const override {
    const std::size_t d = d_;
    double f = 0.0;
    if (grad) std::fill(grad, grad + n_ * d, 0.0);
    for (const auto& [u, v] : edges_) {
      double len2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double e = x[u * d + k] - x[v * d + k];
        len2 += e * e;
      }
      const double len = std::sqrt(len2);
      f += len;
      if (grad && len > 0.0) {
        for (std::size_t k = 0; k < d; ++k) {
          const double g = (x[u * d + k] - x[v * d + k]) / len;
          grad[u * d + k] += g;
          grad[v * d + k] -= g;
        }
      }
    }

    const std::size_t n_samples = flat_samples_.size() / d;
    for (std::size_t s = 0; s < n_samples; ++s) {
      const double* m = &flat_samples_[s * d];
      double best2 = std::numeric_limits<double>::infinity();
      int best_u = -1;
      int best_v = -1;
      double best_t = 0.0;
      if (edges_.empty()) {
        for (std::size_t v = 0; v < n_; ++v) {
          double dist2 = 0.0;
          for (std::size_t k = 0; k < d; ++k) dist2 += (m[k] - x[v * d + k]) * (m[k] - x[v * d + k]);
          if (dist2 < best2) {
            best2 = dist2;
            best_u = best_v = static_cast<int>(v);
          }
        }
      }
      for (const auto& [u, v] : edges_) {
        const double* a = x + u * d;
        const double* b = x + v * d;
        double ab2 = 0.0;
        double am_ab = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double e = b[k] - a[k];
          ab2 += e * e;
          am_ab += (m[k] - a[k]) * e;
        }
        const double t = ab2 > 0.0 ? std::clamp(am_ab / ab2, 0.0, 1.0) : 0.0;
        double dist2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double p = a[k] + t * (b[k] - a[k]);
          dist2 += (m[k] - p) * (m[k] - p);
        }
        if (dist2 < best2) {
          best2 = dist2;
          best_u = u;
          best_v = v;
          best_t = t;
        }
      }
      const double dist = std::sqrt(best2);
      if (best_u < 0 || dist <= r_eff_) continue;
      const double excess = dist - r_eff_;
      f += mu_ * excess * excess;
      if (!grad) continue;
      const double c = 2.0 * mu_ * excess / dist;
      for (std::size_t k = 0; k < d; ++k) {
        const double p = x[best_u * d + k] + best_t * (x[best_v * d + k] - x[best_u * d + k]);
        const double g = c * (p - m[k]);
        grad[best_u * d + k] += (1.0 - best_t) * g;
        grad[best_v * d + k] += best_t * g;
      }
    }
    *cost = f;
    return true;
  }

 private:
  const std::vector<Edge>& edges_;
  std::vector<double> flat_samples_;
  std::size_t n_;
  std::size_t d_;
  double mu_;
  double r_eff_;
};

class TraceCallback final : public ceres::IterationCallback {
 public:
  explicit TraceCallback(std::vector<double>* trace) : trace_(trace) {}
  ceres::CallbackReturnType operator()(const ceres::IterationSummary& s) override {
    if (trace_ && s.step_is_successful) trace_->push_back(s.cost);
    return ceres::SOLVER_CONTINUE;
  }

 private:
  std::vector<double>* trace_;
};

int optimise(MdmNetwork& net, const std::vector<Point>& samples, double mu, double r_eff,
             const NumericConfig& cfg) {
  const std::size_t d = net.dim();
  std::vector<double> x;
  x.reserve(net.vertices.size() * d);
  for (const auto& v : net.vertices) {
    for (std::size_t k = 0; k < d; ++k) x.push_back(v[k]);
  }
  ceres::GradientProblem problem(
      new PenaltyObjective(net.edges, samples, net.vertices.size(), d, mu, r_eff));
  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_num_iterations = cfg.max_iters_per_epoch;
  options.function_tolerance = 1e-15;
  options.gradient_tolerance = 1e-12;
  options.parameter_tolerance = 1e-15;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;
  TraceCallback callback(cfg.trace);
  if (cfg.trace) options.callbacks.push_back(&callback);
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, x.data(), &summary);
  if (cfg.trace) cfg.trace->push_back(std::numeric_limits<double>::quiet_NaN());
  for (std::size_t v = 0; v < net.vertices.size(); ++v) {
    for (std::size_t k = 0; k < d; ++k) net.vertices[v][k] = x[v * d + k];
  }
  return static_cast<int>(summary.iterations.size());
}

struct Nearest {
  int edge = -1;
  double t = 0.0;
  double distance = std::numeric_limits<double>::infinity();
};

Nearest nearest_edge(const MdmNetwork& net, const Point& p) {
  Nearest best;
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const auto proj = project_to_segment(p, net.vertices[net.edges[e].first],
                                         net.vertices[net.edges[e].second]);
    if (proj.distance < best.distance) best = {static_cast<int>(e), proj.t, proj.distance};
  }
  return best;
}

MdmNetwork merge_close_vertices(const MdmNetwork& net, double threshold) {
  const auto c = contract_degenerate(net, 0, threshold);
  if (c.nodes.size() == net.vertices.size()) return net;
  MdmNetwork out;
  out.vertices = c.nodes;
  for (std::size_t v = 0; v < c.adj.size(); ++v) {
    for (int w : c.adj[v]) {
      if (static_cast<int>(v) < w) out.edges.push_back({static_cast<int>(v), w});
    }
  }
  return out;
}

void insert_steiner_vertices(MdmNetwork& net, const ToleranceConfig& tol) {
  const std::size_t n = net.vertices.size();
  std::vector<std::vector<int>> incident(n);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    incident[net.edges[e].first].push_back(static_cast<int>(e));
    incident[net.edges[e].second].push_back(static_cast<int>(e));
  }
  std::vector<char> touched(net.edges.size(), 0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& inc = incident[v];
    double best = kTwoPiOverThree - tol.eps_angle;
    int ea = -1;
    int eb = -1;
    auto other = [&](int e) {
      return net.edges[e].first == static_cast<int>(v) ? net.edges[e].second : net.edges[e].first;
    };
    for (std::size_t i = 0; i < inc.size(); ++i) {
      for (std::size_t j = i + 1; j < inc.size(); ++j) {
        if (touched[inc[i]] || touched[inc[j]]) continue;
        const Point& pv = net.vertices[v];
        const Point& pa = net.vertices[other(inc[i])];
        const Point& pb = net.vertices[other(inc[j])];
        if (pa == pv || pb == pv) continue;
        const double ang = angle_at(pv, pa, pb);
        if (ang < best) {
          best = ang;
          ea = inc[i];
          eb = inc[j];
        }
      }
    }
    if (ea < 0) continue;
    const int a = other(ea);
    const int b = other(eb);
    Point f = fermat_point(net.vertices[v], net.vertices[a], net.vertices[b], tol);
    if (f == net.vertices[v]) continue;
    const int s = static_cast<int>(net.vertices.size());
    net.vertices.push_back(std::move(f));
    net.edges[ea] = {static_cast<int>(v), s};
    net.edges[eb] = {s, a};
    net.edges.push_back({s, b});
    touched[ea] = touched[eb] = 1;
    touched.push_back(1);
  }
}

void split_at(MdmNetwork& net, const Nearest& hit) {
  if (hit.edge < 0 || hit.t <= 0.01 || hit.t >= 0.99) return;
  const auto [u, v] = net.edges[hit.edge];
  const int s = static_cast<int>(net.vertices.size());
  net.vertices.push_back(lerp(net.vertices[u], net.vertices[v], hit.t));
  net.edges[hit.edge] = {u, s};
  net.edges.push_back({s, v});
}

}  // namespace

NumericResult solve_mdm_numeric(const CompactSetDescriptor& desc, double r, const MdmNetwork& init,
                                const NumericConfig& config) {
  validate(desc);
  config.tol.validate();
  if (!(r > 0.0)) throw std::invalid_argument("solve_mdm_numeric: r must be > 0");
  if (init.vertices.empty()) throw std::invalid_argument("solve_mdm_numeric: empty init network");
  common_dimension(init.vertices);
  if (init.dim() != dimension(desc)) throw DimensionMismatch(init.dim(), dimension(desc));
  const auto& tol = config.tol;

  const bool is_curve = perimeter(desc) > 0.0;
  const std::size_t base = default_density(desc, r);
  const std::size_t density = config.density ? config.density : (is_curve ? 4 * base : base);
  const std::vector<Point> working = sample_compact(desc, density);
  const std::size_t check_density =
      config.check_density ? config.check_density : (is_curve ? 40 * base : base);
  auto check = [&](const MdmNetwork& n) {
    return coverage_check_continuous(n, desc, r, check_density, tol);
  };

  double diam = diameter(desc);
  if (diam <= 0.0) diam = r;
  // Samples h apart with dist <= r - h/2 cover the whole curve, since the
  // defect is 1-Lipschitz in arc length.
  const double margin = is_curve ? 0.5 * perimeter(desc) / static_cast<double>(density) : 0.0;
  const double r_eff = r - margin - 0.5 * tol.coverage_eps;
  double mu = 10.0 / diam;

  NumericResult out;
  std::optional<MdmNetwork> best;
  double best_len = std::numeric_limits<double>::infinity();
  if (check(init).covered) {
    best = init;
    best_len = init.length();
  }

  MdmNetwork net = init;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    out.epochs = epoch;
    out.iterations += optimise(net, working, mu, r_eff, config);
    auto peaks = detail::defect_peaks(net, desc, r, check_density);
    std::sort(peaks.begin(), peaks.end(),
              [](const auto& a, const auto& b) { return a.defect > b.defect; });
    const double worst = peaks.empty() ? 0.0 : peaks.front().defect;
    if (worst <= tol.coverage_eps) {
      const double len = net.length();
      if (len < best_len) {
        best = net;
        best_len = len;
      }
      break;
    }
    if (config.topology_moves) {
      net = merge_close_vertices(net, tol.eps_len * diam);
      insert_steiner_vertices(net, tol);
      for (std::size_t i = 0; i < peaks.size() && i < 8; ++i) {
        if (peaks[i].defect > 0.01 * r) split_at(net, nearest_edge(net, peaks[i].point));
      }
    }
    mu *= config.mu_factor;
  }

  out.feasible = best.has_value();
  out.network = best ? std::move(*best) : std::move(net);
  out.length = out.network.length();
  out.coverage = check(out.network);
  return out;
}

}  // namespace steinerlab

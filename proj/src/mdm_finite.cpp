#include "steinerlab/mdm.hpp"
#include "steinerlab/steiner_solver.hpp"

#include "relax.hpp"

#include <limits>

namespace steinerlab {
namespace {

struct Relaxed {
  std::vector<Point> pos;
  double length = 0.0;
  bool converged = false;
};

Relaxed relax_on_balls(std::span<const Point> centers, double r, const Topology& t, double scale,
                       const ToleranceConfig& tol) {
  detail::RelaxProblem p;
  const std::size_t d = centers.front().dim();
  p.pos.assign(centers.begin(), centers.end());
  p.pos.resize(static_cast<std::size_t>(t.node_count()), Point::zeros(d));
  p.adj = t.adjacency();
  p.movable.assign(p.pos.size(), 0);
  p.ball.assign(p.pos.size(), std::nullopt);
  for (int v = 0; v < t.n_terminals; ++v) p.ball[v] = detail::Ball{centers[v], r};
  for (int v = t.n_terminals; v < t.node_count(); ++v) p.movable[v] = 1;
  detail::harmonic_init(p);
  const auto outcome = detail::relax(p, scale, tol, 20000);
  Relaxed out;
  out.length = detail::tree_length(p);
  out.pos = std::move(p.pos);
  out.converged = outcome.converged;
  return out;
}

}  // namespace

FiniteMdmResult solve_mdm_finite(std::span<const Point> points, double r,
                                 const ToleranceConfig& tol, int n_max) {
  tol.validate();
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("solve_mdm_finite: r must be > 0");
  const int n = static_cast<int>(points.size());
  if (n < 1 || n > n_max) {
    throw std::invalid_argument("solve_mdm_finite: point count must lie in [1, " +
                                std::to_string(n_max) + "]");
  }
  common_dimension(points);

  FiniteMdmResult res;
  if (n == 1) {
    res.network.vertices.push_back(points[0]);
    res.topology = Topology{1, 0, {}};
    return res;
  }

  std::vector<Topology> topologies;
  if (n == 2) {
    topologies.push_back(Topology{2, 0, {{0, 1}}});
  } else {
    topologies = enumerate_full_topologies(n, n_max);
  }
  const double scale = std::max(diameter(points), r);

  Relaxed best;
  best.length = std::numeric_limits<double>::infinity();
  const Topology* best_t = nullptr;
  for (const auto& t : topologies) {
    auto relaxed = relax_on_balls(points, r, t, scale, tol);
    res.converged = res.converged && relaxed.converged;
    if (relaxed.length < best.length) {
      best = std::move(relaxed);
      best_t = &t;
    }
  }
  res.relaxed = topologies.size();
  res.topology = *best_t;

  SegmentGraph g;
  g.vertices = best.pos;
  g.edges = best_t->edges;
  const auto c = contract_degenerate(g, n, tol.eps_len * scale);
  res.network.vertices = c.nodes;
  for (std::size_t v = 0; v < c.adj.size(); ++v) {
    for (int w : c.adj[v]) {
      if (static_cast<int>(v) < w) res.network.edges.push_back({static_cast<int>(v), w});
    }
  }
  res.length = res.network.length();
  return res;
}

}  // namespace steinerlab

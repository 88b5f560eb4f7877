#include "steinerlab/steiner_solver.hpp"

#include "relax.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace steinerlab {

const Point& EmbeddedTree::node(int i) const {
  return i < topology.n_terminals ? terminals[i] : steiner_points[i - topology.n_terminals];
}

double EmbeddedTree::recompute_length() const {
  double s = 0.0;
  for (const auto& [u, v] : topology.edges) s += distance(node(u), node(v));
  return s;
}

SegmentGraph EmbeddedTree::graph() const {
  SegmentGraph g;
  g.vertices = terminals;
  g.vertices.insert(g.vertices.end(), steiner_points.begin(), steiner_points.end());
  g.edges = topology.edges;
  return g;
}

double EmbeddedTree::diameter() const { return steinerlab::diameter(terminals); }

EmbeddedTree relax_topology(std::span<const Point> terminals, const Topology& t,
                            const ToleranceConfig& tol, const RelaxOptions& options) {
  tol.validate();
  if (static_cast<int>(terminals.size()) != t.n_terminals) {
    throw std::invalid_argument("relax_topology: terminal count does not match topology");
  }
  if (!is_tree(t)) throw TopologyError("relax_topology: topology is not a tree");
  const std::size_t d = common_dimension(terminals);

  detail::RelaxProblem p;
  p.pos.assign(terminals.begin(), terminals.end());
  p.pos.resize(static_cast<std::size_t>(t.node_count()), Point::zeros(d));
  p.adj = t.adjacency();
  p.movable.assign(p.pos.size(), 0);
  for (int v = t.n_terminals; v < t.node_count(); ++v) p.movable[v] = 1;

  const double scale = diameter(terminals);
  detail::harmonic_init(p);
  const auto outcome = detail::relax(p, scale, tol, options.max_iters, options.trace);

  EmbeddedTree tree;
  tree.topology = t;
  tree.terminals.assign(terminals.begin(), terminals.end());
  tree.steiner_points.assign(p.pos.begin() + t.n_terminals, p.pos.end());
  tree.length = tree.recompute_length();
  tree.iterations = outcome.iterations;
  tree.converged = outcome.converged;
  return tree;
}

ContractedTree contract_degenerate(const SegmentGraph& g, int n_terminals, double threshold) {
  const int n = static_cast<int>(g.vertices.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [u, v] : g.edges) {
    if (distance(g.vertices[u], g.vertices[v]) <= threshold) {
      const int ru = find(u);
      const int rv = find(v);
      if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
    }
  }
  ContractedTree c;
  c.class_of.assign(n, -1);
  std::map<int, int> root_to_class;
  for (int v = 0; v < n; ++v) {
    const int r = find(v);
    auto [it, inserted] = root_to_class.try_emplace(r, static_cast<int>(c.nodes.size()));
    if (inserted) {
      c.nodes.push_back(g.vertices[r]);
      c.labels.push_back(r < n_terminals ? r : -1);
    }
    c.class_of[v] = it->second;
  }
  c.adj.resize(c.nodes.size());
  for (const auto& [u, v] : g.edges) {
    const int a = c.class_of[u];
    const int b = c.class_of[v];
    if (a == b) continue;
    if (std::find(c.adj[a].begin(), c.adj[a].end(), b) == c.adj[a].end()) {
      c.adj[a].push_back(b);
      c.adj[b].push_back(a);
    }
  }
  return c;
}

ContractedTree contract_degenerate(const EmbeddedTree& tree, const ToleranceConfig& tol) {
  return contract_degenerate(tree.graph(), tree.topology.n_terminals,
                             tol.eps_len * tree.diameter());
}

std::string embedding_key(const EmbeddedTree& tree, const ToleranceConfig& tol) {
  const auto c = contract_degenerate(tree, tol);
  return canonical_key(c.adj, c.labels);
}

ExactSolution solve_exact(std::span<const Point> terminals, const ToleranceConfig& tol,
                          int n_max) {
  tol.validate();
  const int n = static_cast<int>(terminals.size());
  if (n < 2 || n > n_max) {
    throw std::invalid_argument("solve_exact: terminal count must lie in [2, " +
                                std::to_string(n_max) + "]");
  }
  common_dimension(terminals);

  ExactSolution sol;
  if (n == 2) {
    const Topology seg{2, 0, {{0, 1}}};
    sol.best = relax_topology(terminals, seg, tol);
    sol.cominimal.push_back(seg);
    sol.relaxed = 1;
    return sol;
  }

  const auto topologies = enumerate_full_topologies(n, n_max);
  std::vector<EmbeddedTree> trees;
  trees.reserve(topologies.size());
  for (const auto& t : topologies) {
    trees.push_back(relax_topology(terminals, t, tol));
    if (!trees.back().converged) sol.unconverged.push_back(t);
  }
  sol.relaxed = trees.size();

  struct Candidate {
    double length;
    std::string key;
    std::size_t index;
  };
  double best_len = trees[0].length;
  for (const auto& tr : trees) best_len = std::min(best_len, tr.length);

  std::vector<Candidate> tied;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (trees[i].length <= best_len + tol.eps_tie * best_len) {
      tied.push_back({trees[i].length, canonical_key(trees[i].topology), i});
    }
  }
  std::sort(tied.begin(), tied.end(),
            [](const Candidate& a, const Candidate& b) { return a.key < b.key; });

  const Candidate* chosen = &tied.front();
  for (const auto& c : tied) {
    if (c.length < chosen->length) chosen = &c;
  }
  sol.best = trees[chosen->index];

  std::map<std::string, std::size_t> by_embedding;
  for (const auto& c : tied) {
    by_embedding.try_emplace(embedding_key(trees[c.index], tol), c.index);
  }
  std::vector<std::pair<std::string, std::size_t>> reps;
  for (const auto& [emb, idx] : by_embedding) reps.push_back({canonical_key(topologies[idx]), idx});
  std::sort(reps.begin(), reps.end());
  for (const auto& [key, idx] : reps) sol.cominimal.push_back(topologies[idx]);
  return sol;
}

TreeReport verify_tree(const EmbeddedTree& tree, const ToleranceConfig& tol) {
  TreeReport rep;
  rep.is_tree = is_tree(tree.topology);
  const double threshold = tol.eps_len * tree.diameter();
  for (const auto& [u, v] : tree.topology.edges) {
    if (distance(tree.node(u), tree.node(v)) <= threshold) rep.degenerate_edges.push_back({u, v});
  }
  const auto c = contract_degenerate(tree.graph(), tree.topology.n_terminals, threshold);
  for (std::size_t v = 0; v < c.nodes.size(); ++v) {
    const auto& nb = c.adj[v];
    rep.max_degree = std::max(rep.max_degree, static_cast<int>(nb.size()));
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const double a = angle_at(c.nodes[v], c.nodes[nb[i]], c.nodes[nb[j]]);
        rep.min_angle = rep.min_angle ? std::min(*rep.min_angle, a) : a;
      }
    }
  }
  return rep;
}

namespace {

struct SphereHits {
  int roots = 0;
  double s1 = 0.0;
  double s2 = 0.0;
};

// Parameters s where |p0 + s (p1 - p0) - x| = rho, sorted.
SphereHits segment_sphere(const Point& p0, const Point& p1, const Point& x, double rho) {
  const Point e = p1 - p0;
  const Point f = p0 - x;
  const double a = e.squared_norm();
  if (a == 0.0) return {};
  const double b = 2.0 * e.dot(f);
  const double c = f.squared_norm() - rho * rho;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {1, -b / (2.0 * a), -b / (2.0 * a)};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double r1 = q / a;
  double r2 = q != 0.0 ? c / q : -r1;
  if (r1 > r2) std::swap(r1, r2);
  return {2, r1, r2};
}

}  // namespace

CrossingCount count_crossings(const SegmentGraph& g, const Point& x, double radius,
                              const ToleranceConfig& tol) {
  CrossingCount out;
  std::vector<Point> hits;
  const double eps = tol.coverage_eps;
  for (const auto& v : g.vertices) {
    if (std::abs(distance(v, x) - radius) <= eps) out.degenerate = true;
  }
  for (const auto& [u, v] : g.edges) {
    const Point& p0 = g.vertices[u];
    const Point& p1 = g.vertices[v];
    const double dmin = dist_point_to_segment(x, p0, p1);
    const double dmax = std::max(distance(x, p0), distance(x, p1));
    if (std::abs(dmin - radius) <= eps && dmax > radius + eps) out.degenerate = true;
    const auto h = segment_sphere(p0, p1, x, radius);
    for (int k = 0; k < h.roots; ++k) {
      const double s = k == 0 ? h.s1 : h.s2;
      if (s < 0.0 || s > 1.0) continue;
      Point q = lerp(p0, p1, s);
      const bool seen = std::any_of(hits.begin(), hits.end(),
                                    [&](const Point& o) { return distance(o, q) <= eps; });
      if (!seen) hits.push_back(std::move(q));
    }
  }
  out.count = static_cast<int>(hits.size());
  return out;
}

CrossingCount count_crossings(const EmbeddedTree& tree, const Point& x, double r, double t,
                              const ToleranceConfig& tol) {
  if (!(t > 0.0 && t < 1.0) || !(r > 0.0)) {
    throw std::invalid_argument("count_crossings: need 0 < t < 1 and r > 0");
  }
  return count_crossings(tree.graph(), x, t * r, tol);
}

int count_branching_in_ball(const EmbeddedTree& tree, const Point& x, double r, double t,
                            const ToleranceConfig& tol) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("count_branching_in_ball: 0 < t < 1");
  const auto c = contract_degenerate(tree, tol);
  int count = 0;
  for (std::size_t v = 0; v < c.nodes.size(); ++v) {
    if (c.adj[v].size() >= 3 && distance(c.nodes[v], x) < t * r) ++count;
  }
  return count;
}

double length_in_ball(const SegmentGraph& g, const Point& x, double radius) {
  double total = 0.0;
  for (const auto& [u, v] : g.edges) {
    const Point& p0 = g.vertices[u];
    const Point& p1 = g.vertices[v];
    const auto h = segment_sphere(p0, p1, x, radius);
    if (h.roots < 2) continue;
    const double lo = std::max(0.0, h.s1);
    const double hi = std::min(1.0, h.s2);
    if (hi > lo) total += (hi - lo) * distance(p0, p1);
  }
  return total;
}

double length_in_ball(const EmbeddedTree& tree, const Point& x, double r, double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("length_in_ball: 0 < t < 1");
  return length_in_ball(tree.graph(), x, t * r);
}

double branching_bound(std::size_t d, double t) {
  return std::pow(32.0 * static_cast<double>(d) / (1.0 - t), static_cast<double>(d) - 1.0);
}

double length_ratio_bound(std::size_t d, double t) {
  const double k = static_cast<double>(d) - 2.0;
  return std::pow(32.0 * static_cast<double>(d), k) / std::pow(1.0 - t, k);
}

}  // namespace steinerlab

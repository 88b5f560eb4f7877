#pragma once

#include "steinerlab/geom.hpp"
#include "steinerlab/topology.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace steinerlab {

/// A topology embedded with straight edges: terminals are nodes 0..n-1,
/// Steiner points are nodes n..n+s-1.
struct EmbeddedTree {
  Topology topology;
  std::vector<Point> terminals;
  std::vector<Point> steiner_points;
  double length = 0.0;
  int iterations = 0;
  bool converged = true;

  const Point& node(int i) const;
  double recompute_length() const;
  SegmentGraph graph() const;
  double diameter() const;
};

struct RelaxOptions {
  int max_iters = 20000;
  /// When set, receives the tree length after every iteration.
  std::vector<double>* trace = nullptr;
};

/// Moves the Steiner points of `t` to a stationary point of total length.
/// Steiner points may end on terminals or on each other; such zero-length
/// edges encode non-full optima. Hitting max_iters returns the best iterate
/// with converged = false.
EmbeddedTree relax_topology(std::span<const Point> terminals, const Topology& t,
                            const ToleranceConfig& tol, const RelaxOptions& options = {});

struct ExactSolution {
  EmbeddedTree best;
  /// One representative full topology per distinct co-minimal tree, sorted
  /// by canonical key. Topologies whose embeddings degenerate to the same
  /// tree count once.
  std::vector<Topology> cominimal;
  /// Topologies whose relaxation hit the iteration cap.
  std::vector<Topology> unconverged;
  std::size_t relaxed = 0;
};

/// Exact Steiner minimal tree by exhaustion over full topologies.
ExactSolution solve_exact(std::span<const Point> terminals, const ToleranceConfig& tol,
                          int n_max = kDefaultNMax);

/// Tree with degenerate edges (shorter than eps_len * diameter) contracted.
/// Node labels are the smallest terminal index in each class, or -1.
struct ContractedTree {
  std::vector<Point> nodes;
  std::vector<int> labels;
  std::vector<std::vector<int>> adj;
  std::vector<int> class_of;  // original node -> contracted node
};

ContractedTree contract_degenerate(const SegmentGraph& g, int n_terminals, double threshold);
ContractedTree contract_degenerate(const EmbeddedTree& tree, const ToleranceConfig& tol);

/// Canonical key of the contracted tree; two relaxed topologies with equal
/// keys describe the same tree.
std::string embedding_key(const EmbeddedTree& tree, const ToleranceConfig& tol);

struct TreeReport {
  std::optional<double> min_angle;  ///< empty when no node has two edges
  int max_degree = 0;
  std::vector<Edge> degenerate_edges;
  bool is_tree = false;
};

TreeReport verify_tree(const EmbeddedTree& tree, const ToleranceConfig& tol);

struct CrossingCount {
  int count = 0;
  bool degenerate = false;  ///< an edge or vertex lies within coverage_eps of the sphere
};

/// Number of points where the sphere of radius t*r about x meets the edges.
CrossingCount count_crossings(const EmbeddedTree& tree, const Point& x, double r, double t,
                              const ToleranceConfig& tol = {});
CrossingCount count_crossings(const SegmentGraph& g, const Point& x, double radius,
                              const ToleranceConfig& tol = {});

/// Degree >= 3 nodes (after contraction) strictly inside B_{t r}(x).
int count_branching_in_ball(const EmbeddedTree& tree, const Point& x, double r, double t,
                            const ToleranceConfig& tol = {});

/// Total edge length inside the closed ball of radius t*r about x.
double length_in_ball(const EmbeddedTree& tree, const Point& x, double r, double t);
double length_in_ball(const SegmentGraph& g, const Point& x, double radius);

/// Upper bounds conjectured for terminal-free balls: branching points
/// (32d/(1-t))^(d-1) and, for d > 2, length/r <= (32d)^(d-2)/(1-t)^(d-2).
double branching_bound(std::size_t d, double t);
double length_ratio_bound(std::size_t d, double t);

}  // namespace steinerlab

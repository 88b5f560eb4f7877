#pragma once

// Shared length-minimisation engine for trees with fixed adjacency.
// Used by relax_topology (fixed terminals) and solve_mdm_finite (terminals
// free inside balls).

#include "steinerlab/geom.hpp"

#include <optional>
#include <vector>

namespace steinerlab::detail {

struct Ball {
  Point center;
  double radius;
};

struct RelaxProblem {
  std::vector<Point> pos;
  std::vector<std::vector<int>> adj;
  std::vector<char> movable;             // Steiner nodes
  std::vector<std::optional<Ball>> ball;  // attachment constraint, empty or per node
};

struct RelaxOutcome {
  int iterations = 0;
  bool converged = false;
};

double tree_length(const RelaxProblem& p);

/// Places movable nodes at the harmonic (unit-weight) embedding.
void harmonic_init(RelaxProblem& p);

/// Block-coordinate Fermat sweeps interleaved with a guarded joint
/// reweighted step, then degenerate-edge snapping and a Newton polish.
/// `scale` is the instance diameter. When `trace` is set it receives the
/// length after every iteration.
RelaxOutcome relax(RelaxProblem& p, double scale, const ToleranceConfig& tol, int max_iters,
                   std::vector<double>* trace = nullptr);

}  // namespace steinerlab::detail

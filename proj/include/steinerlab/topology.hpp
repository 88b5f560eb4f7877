#pragma once

#include "steinerlab/geom.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace steinerlab {

inline constexpr int kDefaultNMax = 9;

/// Abstract tree over labeled terminals 0..n-1 and unlabeled Steiner nodes
/// n..n+s-1. Full topologies have every terminal of degree 1 and every
/// Steiner node of degree 3; trees produced by heuristics may be non-full.
struct Topology {
  int n_terminals = 0;
  int n_steiner = 0;
  std::vector<Edge> edges;

  int node_count() const { return n_terminals + n_steiner; }
  bool is_terminal(int node) const { return node < n_terminals; }
  std::vector<std::vector<int>> adjacency() const;

  friend bool operator==(const Topology&, const Topology&) = default;
};

class TopologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// True when the edge list forms a tree over all nodes.
bool is_tree(const Topology& t);

/// True for a tree with degree-1 terminals, degree-3 Steiner nodes and,
/// for n >= 3, exactly n-2 Steiner nodes. The n = 2 segment counts as full.
bool is_full_topology(const Topology& t);

/// Throws TopologyError describing the first violated invariant.
void validate_full_topology(const Topology& t);

/// (2n-4)! / (2^(n-2) (n-2)!) evaluated exactly.
boost::multiprecision::cpp_int count_full_topologies(int n);

/// All full topologies on n labeled terminals, built by inserting terminal
/// k into every edge of every topology on k terminals. Output order is
/// deterministic.
std::vector<Topology> enumerate_full_topologies(int n, int n_max = kDefaultNMax);

/// Path-like topology: Steiner chain with terminals 0,1 on the first node,
/// terminal k on chain node k-1, and the last two terminals on the last node.
Topology caterpillar_topology(int n);

/// Canonical string for a tree whose nodes carry a terminal label (>= 0) or
/// none (-1). Equal keys iff the trees are isomorphic by a map preserving
/// terminal labels. The tree is rooted at the node labeled with the smallest
/// terminal.
std::string canonical_key(const std::vector<std::vector<int>>& adjacency,
                          const std::vector<int>& labels);

std::string canonical_key(const Topology& t);

}  // namespace steinerlab

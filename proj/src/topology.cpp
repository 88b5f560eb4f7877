#include "steinerlab/topology.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace steinerlab {

namespace mp = boost::multiprecision;

std::vector<std::vector<int>> Topology::adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(node_count()));
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

bool is_tree(const Topology& t) {
  const int n = t.node_count();
  if (n <= 0) return false;
  if (static_cast<int>(t.edges.size()) != n - 1) return false;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& [u, v] : t.edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) return false;
    const int ru = find(u);
    const int rv = find(v);
    if (ru == rv) return false;
    parent[ru] = rv;
  }
  return true;
}

bool is_full_topology(const Topology& t) {
  try {
    validate_full_topology(t);
    return true;
  } catch (const TopologyError&) {
    return false;
  }
}

void validate_full_topology(const Topology& t) {
  if (t.n_terminals < 2) throw TopologyError("topology needs at least two terminals");
  if (t.n_terminals >= 3 && t.n_steiner != t.n_terminals - 2) {
    throw TopologyError("full topology must have n-2 Steiner nodes");
  }
  if (t.n_terminals == 2 && t.n_steiner != 0) {
    throw TopologyError("two-terminal topology has no Steiner nodes");
  }
  if (!is_tree(t)) throw TopologyError("edges do not form a tree");
  const auto adj = t.adjacency();
  for (int v = 0; v < t.node_count(); ++v) {
    const auto deg = adj[v].size();
    if (t.is_terminal(v) && deg != 1) throw TopologyError("terminal degree must be 1");
    if (!t.is_terminal(v) && deg != 3) throw TopologyError("Steiner degree must be 3");
  }
}

mp::cpp_int count_full_topologies(int n) {
  if (n < 3) throw std::invalid_argument("count_full_topologies: n must be >= 3");
  auto factorial = [](int k) {
    mp::cpp_int f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  const mp::cpp_int num = factorial(2 * n - 4);
  const mp::cpp_int den = (mp::cpp_int(1) << (n - 2)) * factorial(n - 2);
  return num / den;
}

std::vector<Topology> enumerate_full_topologies(int n, int n_max) {
  if (n < 3 || n > n_max) {
    throw std::invalid_argument("enumerate_full_topologies: n must lie in [3, " +
                                std::to_string(n_max) + "]");
  }
  // Steiner node j gets index n + j, so labels never need renumbering.
  Topology seed{n, 1, {{0, n}, {1, n}, {2, n}}};
  std::vector<Topology> level{seed};
  for (int k = 3; k < n; ++k) {
    const int steiner = n + (k - 2);
    std::vector<Topology> next;
    next.reserve(level.size() * (2 * k - 3));
    for (const auto& t : level) {
      for (std::size_t e = 0; e < t.edges.size(); ++e) {
        Topology grown{n, t.n_steiner + 1, t.edges};
        const auto [u, v] = t.edges[e];
        grown.edges[e] = {u, steiner};
        grown.edges.push_back({v, steiner});
        grown.edges.push_back({k, steiner});
        next.push_back(std::move(grown));
      }
    }
    level = std::move(next);
  }
  return level;
}

Topology caterpillar_topology(int n) {
  if (n < 2) throw std::invalid_argument("caterpillar_topology: n must be >= 2");
  if (n == 2) return Topology{2, 0, {{0, 1}}};
  if (n == 3) return Topology{3, 1, {{0, 3}, {1, 3}, {2, 3}}};
  const int s = n - 2;
  Topology t{n, s, {}};
  t.edges.push_back({0, n});
  t.edges.push_back({1, n});
  for (int j = 1; j < s; ++j) {
    t.edges.push_back({n + j - 1, n + j});
    if (j < s - 1) t.edges.push_back({j + 1, n + j});
  }
  t.edges.push_back({n - 2, n + s - 1});
  t.edges.push_back({n - 1, n + s - 1});
  return t;
}

std::string canonical_key(const std::vector<std::vector<int>>& adjacency,
                          const std::vector<int>& labels) {
  const int n = static_cast<int>(adjacency.size());
  if (n == 0) return "()";
  int root = -1;
  for (int v = 0; v < n; ++v) {
    if (labels[v] >= 0 && (root < 0 || labels[v] < labels[root])) root = v;
  }
  if (root < 0) root = 0;

  // Iterative post-order so deep caterpillars cannot overflow the stack.
  std::vector<std::string> code(n);
  std::vector<int> parent(n, -1);
  std::vector<int> order;
  order.reserve(n);
  std::vector<int> stack{root};
  parent[root] = root;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int w : adjacency[v]) {
      if (parent[w] == -1) {
        parent[w] = v;
        stack.push_back(w);
      }
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    std::vector<std::string> kids;
    for (int w : adjacency[v]) {
      if (w != root && parent[w] == v) kids.push_back(std::move(code[w]));
    }
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    s += labels[v] >= 0 ? "t" + std::to_string(labels[v]) : "s";
    for (auto& k : kids) s += k;
    s += ")";
    code[v] = std::move(s);
  }
  return code[root];
}

std::string canonical_key(const Topology& t) {
  std::vector<int> labels(static_cast<std::size_t>(t.node_count()), -1);
  for (int v = 0; v < t.n_terminals; ++v) labels[v] = v;
  return canonical_key(t.adjacency(), labels);
}

}  // namespace steinerlab

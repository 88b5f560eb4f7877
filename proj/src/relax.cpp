#include "relax.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace steinerlab::detail {
namespace {

double local_length(const RelaxProblem& p, int v, const Point& at) {
  double s = 0.0;
  for (int w : p.adj[v]) s += distance(at, p.pos[w]);
  return s;
}

// Nearest point of the closed ball to the (single) neighbour.
double project_attachments(RelaxProblem& p) {
  double max_move = 0.0;
  if (p.ball.empty()) return 0.0;
  for (std::size_t v = 0; v < p.pos.size(); ++v) {
    if (!p.ball[v] || p.adj[v].size() != 1) continue;
    const Ball& b = *p.ball[v];
    const Point& q = p.pos[p.adj[v][0]];
    const double d = distance(q, b.center);
    Point target = d <= b.radius ? q : b.center + (q - b.center) * (b.radius / d);
    max_move = std::max(max_move, distance(target, p.pos[v]));
    p.pos[v] = std::move(target);
  }
  return max_move;
}

// Minimises the sum of distances from x to the balls (points have radius
// zero) by damped Newton on a smoothed objective, tightening the smoothing
// geometrically.
Point ball_median(const std::vector<Ball>& terms, Point x, double scale) {
  const std::size_t d = x.dim();
  auto value = [&](const Point& y, double eps) {
    double s = 0.0;
    for (const auto& b : terms) {
      const double dist = std::max(0.0, distance(y, b.center) - b.radius);
      s += std::sqrt(dist * dist + eps * eps);
    }
    return s;
  };
  for (double eps = 1e-3 * scale; eps >= 1e-13 * scale; eps *= 0.01) {
    for (int it = 0; it < 20; ++it) {
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
      Eigen::MatrixXd hess = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                                       static_cast<Eigen::Index>(d)) *
                             (1e-12 / scale);
      for (const auto& b : terms) {
        const double len = distance(x, b.center);
        const double dist = len - b.radius;
        if (dist <= 0.0 || len == 0.0) continue;
        const double h = std::sqrt(dist * dist + eps * eps);
        Eigen::VectorXd u(d);
        for (std::size_t k = 0; k < d; ++k) u[static_cast<Eigen::Index>(k)] = (x[k] - b.center[k]) / len;
        grad += u * (dist / h);
        hess += u * u.transpose() * (eps * eps / (h * h * h)) +
                (Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) -
                 u * u.transpose()) *
                    (dist / (h * len));
      }
      if (grad.norm() < 1e-14) break;
      Eigen::VectorXd step = hess.ldlt().solve(-grad);
      if (!step.allFinite() || step.dot(grad) >= 0.0) step = -grad * eps;
      const double f0 = value(x, eps);
      bool moved = false;
      for (double t = 1.0; t > 1e-8; t *= 0.5) {
        Point y = x;
        for (std::size_t k = 0; k < d; ++k) y[k] += t * step[static_cast<Eigen::Index>(k)];
        if (value(y, eps) < f0) {
          x = std::move(y);
          moved = true;
          break;
        }
      }
      if (!moved || step.norm() < 1e-15 * scale) break;
    }
  }
  return x;
}

bool is_leaf_attachment(const RelaxProblem& p, int w) {
  return !p.ball.empty() && p.ball[w] && p.adj[w].size() == 1;
}

Point project_to_ball(const Ball& b, const Point& q) {
  const double d = distance(q, b.center);
  return d <= b.radius ? q : b.center + (q - b.center) * (b.radius / d);
}

// First-order optimality of v for the combined move when at most one leaf
// ball has v on its boundary: the pull of the other neighbours must lie in
// the normal cone of that ball.
bool leaves_stationary(const RelaxProblem& p, int v, double scale) {
  const double tiny = 1e-9 * scale;
  Point pull = Point::zeros(p.pos[v].dim());
  std::optional<Point> normal;
  for (int w : p.adj[v]) {
    if (is_leaf_attachment(p, w)) {
      const Ball& b = *p.ball[w];
      const double gap = distance(p.pos[v], b.center) - b.radius;
      if (gap < -tiny) continue;
      if (gap > tiny || normal) return false;
      normal = (p.pos[v] - b.center) / distance(p.pos[v], b.center);
      continue;
    }
    const double d = distance(p.pos[w], p.pos[v]);
    if (d <= tiny) return false;
    pull += (p.pos[w] - p.pos[v]) / d;
  }
  if (!normal) return pull.norm() <= 1e-9;
  const double t = pull.dot(*normal);
  return t >= -1e-9 && t <= 1.0 + 1e-9 && (pull - *normal * t).norm() <= 1e-9;
}

// Moves v together with its attachment leaves, which follow by projection.
// Block updates alone lock once a leaf and v coincide inside a ball.
bool leaf_locked(const RelaxProblem& p, int v, double scale) {
  return std::any_of(p.adj[v].begin(), p.adj[v].end(), [&](int w) {
    return is_leaf_attachment(p, w) && distance(p.pos[w], p.pos[v]) <= 1e-6 * scale;
  });
}

double carry_leaves(RelaxProblem& p, int v, const ToleranceConfig& tol, double scale) {
  if (leaves_stationary(p, v, scale)) return 0.0;
  std::vector<Ball> terms;
  std::vector<int> leaves;
  for (int w : p.adj[v]) {
    if (is_leaf_attachment(p, w)) {
      terms.push_back(*p.ball[w]);
      leaves.push_back(w);
    } else {
      terms.push_back(Ball{p.pos[w], 0.0});
    }
  }
  if (leaves.empty()) return 0.0;
  auto cost = [&](const Point& at) {
    double s = 0.0;
    for (int w : p.adj[v]) {
      s += is_leaf_attachment(p, w) ? distance(at, project_to_ball(*p.ball[w], at))
                                    : distance(at, p.pos[w]);
    }
    return s;
  };
  const double before = local_length(p, v, p.pos[v]);
  Point candidate = p.pos[v];
  bool exact = false;
  if (terms.size() == 3) {
    // Outside every ball the problem is the Fermat problem of the centres.
    candidate = fermat_point(terms[0].center, terms[1].center, terms[2].center, tol);
    exact = std::all_of(terms.begin(), terms.end(), [&](const Ball& b) {
      return b.radius == 0.0 || distance(candidate, b.center) > b.radius;
    });
  }
  if (!exact) candidate = ball_median(terms, p.pos[v], scale);
  if (!(cost(candidate) < before)) return 0.0;
  const double move = distance(candidate, p.pos[v]);
  p.pos[v] = std::move(candidate);
  for (int w : leaves) p.pos[w] = project_to_ball(*p.ball[w], p.pos[v]);
  return move;
}

double fermat_sweep(RelaxProblem& p, const ToleranceConfig& tol, double scale) {
  double max_move = 0.0;
  for (std::size_t v = 0; v < p.pos.size(); ++v) {
    if (!p.movable[v]) continue;
    const int iv = static_cast<int>(v);
    if (leaf_locked(p, iv, scale)) {
      max_move = std::max(max_move, carry_leaves(p, iv, tol, scale));
      continue;
    }
    const auto& nb = p.adj[v];
    Point candidate = p.pos[v];
    if (nb.size() == 3) {
      candidate = fermat_point(p.pos[nb[0]], p.pos[nb[1]], p.pos[nb[2]], tol);
    } else if (!nb.empty()) {
      std::vector<Point> pts;
      for (int w : nb) pts.push_back(p.pos[w]);
      std::vector<double> ones(pts.size(), 1.0);
      candidate = geometric_median(pts, ones, tol, 200);
    }
    if (local_length(p, iv, candidate) < local_length(p, iv, p.pos[v])) {
      max_move = std::max(max_move, distance(candidate, p.pos[v]));
      p.pos[v] = std::move(candidate);
    }
  }
  return max_move;
}

// Solves the weighted Laplacian system for all movable nodes at once. The
// movable nodes induce a forest, so leaf-first elimination is exact and
// fill-free: each node is written as alpha + beta * parent.
std::vector<Point> weighted_solve(const RelaxProblem& p, const std::vector<std::vector<double>>& w) {
  const std::size_t n = p.pos.size();
  std::vector<Point> out = p.pos;
  std::vector<int> parent(n, -2);
  std::vector<Point> alpha(n, Point::zeros(p.pos[0].dim()));
  std::vector<double> beta(n, 0.0);
  std::vector<double> parent_w(n, 0.0);

  for (std::size_t root = 0; root < n; ++root) {
    if (!p.movable[root] || parent[root] != -2) continue;
    std::vector<int> order{static_cast<int>(root)};
    parent[root] = -1;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int v = order[k];
      for (std::size_t j = 0; j < p.adj[v].size(); ++j) {
        const int u = p.adj[v][j];
        if (p.movable[u] && parent[u] == -2) {
          parent[u] = v;
          parent_w[u] = w[v][j];
          order.push_back(u);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      double diag = 0.0;
      Point rhs = Point::zeros(p.pos[0].dim());
      for (std::size_t j = 0; j < p.adj[v].size(); ++j) {
        const int u = p.adj[v][j];
        const double wu = w[v][j];
        diag += wu;
        if (!p.movable[u]) {
          rhs += p.pos[u] * wu;
        } else if (parent[u] == v) {
          diag -= wu * beta[u];
          rhs += alpha[u] * wu;
        }
      }
      alpha[v] = rhs / diag;
      beta[v] = parent[v] >= 0 ? parent_w[v] / diag : 0.0;
    }
    for (int v : order) {
      out[v] = alpha[v];
      if (parent[v] >= 0) out[v] += out[parent[v]] * beta[v];
    }
  }
  return out;
}

double joint_step(RelaxProblem& p, double eta, double& length) {
  std::vector<std::vector<double>> w(p.pos.size());
  for (std::size_t v = 0; v < p.pos.size(); ++v) {
    for (int u : p.adj[v]) w[v].push_back(1.0 / std::max(distance(p.pos[v], p.pos[u]), eta));
  }
  std::vector<Point> next = weighted_solve(p, w);
  std::swap(next, p.pos);
  const double trial = tree_length(p);
  if (trial < length) {
    double max_move = 0.0;
    for (std::size_t v = 0; v < p.pos.size(); ++v) {
      if (p.movable[v]) max_move = std::max(max_move, distance(next[v], p.pos[v]));
    }
    length = trial;
    return max_move;
  }
  std::swap(next, p.pos);
  return 0.0;
}

// Movable nodes reachable from v through edges shorter than `snap`, not
// crossing `stop`.
std::vector<int> short_cluster(const RelaxProblem& p, int v, int stop, double snap) {
  std::vector<int> out{v};
  std::vector<char> seen(p.pos.size(), 0);
  seen[v] = 1;
  seen[stop] = 1;
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (int w : p.adj[out[k]]) {
      if (seen[w] || !p.movable[w] || distance(p.pos[out[k]], p.pos[w]) > snap) continue;
      seen[w] = 1;
      out.push_back(w);
    }
  }
  return out;
}

// Moves clusters of movable nodes onto a neighbour closer than `snap` when
// the tree gets no longer than length * (1 + slack). Borderline vertex
// optima are otherwise approached only sublinearly.
bool snap_short_edges(RelaxProblem& p, double snap, double slack) {
  bool changed = false;
  double length = tree_length(p);
  for (std::size_t v = 0; v < p.pos.size(); ++v) {
    if (!p.movable[v]) continue;
    for (int u : p.adj[v]) {
      const double d = distance(p.pos[v], p.pos[u]);
      if (d == 0.0 || d > snap) continue;
      const auto cluster = short_cluster(p, static_cast<int>(v), u, snap);
      std::vector<Point> saved;
      for (int w : cluster) {
        saved.push_back(p.pos[w]);
        p.pos[w] = p.pos[u];
      }
      const double trial = tree_length(p);
      if (slack > 0.0 ? trial <= length * (1.0 + slack) : trial < length) {
        length = std::min(length, trial);
        changed = true;
        break;
      }
      for (std::size_t k = 0; k < cluster.size(); ++k) p.pos[cluster[k]] = std::move(saved[k]);
    }
  }
  return changed;
}

void newton_polish(RelaxProblem& p, double scale, double degenerate, std::vector<double>* trace) {
  const std::size_t n = p.pos.size();
  const std::size_t d = p.pos[0].dim();
  std::vector<int> index(n, -1);
  int active = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!p.movable[v]) continue;
    bool ok = true;
    for (int u : p.adj[v]) ok = ok && distance(p.pos[v], p.pos[u]) > degenerate;
    if (ok) index[v] = active++;
  }
  if (active == 0) return;

  double length = tree_length(p);
  const auto dim = static_cast<Eigen::Index>(active * d);
  for (int it = 0; it < 30; ++it) {
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);
    for (std::size_t v = 0; v < n; ++v) {
      if (index[v] < 0) continue;
      const Eigen::Index bv = index[v] * static_cast<Eigen::Index>(d);
      for (int u : p.adj[v]) {
        Point e = p.pos[v] - p.pos[u];
        const double len = e.norm();
        Eigen::VectorXd unit(d);
        for (std::size_t k = 0; k < d; ++k) unit[k] = e[k] / len;
        const Eigen::MatrixXd block =
            (Eigen::MatrixXd::Identity(d, d) - unit * unit.transpose()) / len;
        grad.segment(bv, d) += unit;
        hess.block(bv, bv, d, d) += block;
        if (index[u] >= 0) {
          const Eigen::Index bu = index[u] * static_cast<Eigen::Index>(d);
          hess.block(bv, bu, d, d) -= block;
        }
      }
    }
    if (grad.norm() < 1e-15) break;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    if (ldlt.info() != Eigen::Success) break;
    const Eigen::VectorXd step = ldlt.solve(-grad);
    if (!step.allFinite()) break;

    std::vector<Point> saved = p.pos;
    bool accepted = false;
    for (double t = 1.0; t > 1e-4; t *= 0.5) {
      for (std::size_t v = 0; v < n; ++v) {
        if (index[v] < 0) continue;
        for (std::size_t k = 0; k < d; ++k) {
          p.pos[v][k] = saved[v][k] + t * step[index[v] * static_cast<Eigen::Index>(d) + k];
        }
      }
      const double trial = tree_length(p);
      if (trial <= length) {
        length = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      p.pos = std::move(saved);
      break;
    }
    if (trace) trace->push_back(length);
    if (step.norm() < 1e-15 * scale) break;
  }
}

}  // namespace

double tree_length(const RelaxProblem& p) {
  double s = 0.0;
  for (std::size_t v = 0; v < p.pos.size(); ++v) {
    for (int u : p.adj[v]) {
      if (static_cast<int>(v) < u) s += distance(p.pos[v], p.pos[u]);
    }
  }
  return s;
}

void harmonic_init(RelaxProblem& p) {
  std::vector<std::vector<double>> w(p.pos.size());
  for (std::size_t v = 0; v < p.pos.size(); ++v) w[v].assign(p.adj[v].size(), 1.0);
  p.pos = weighted_solve(p, w);
}

namespace {

RelaxOutcome descend(RelaxProblem& p, double scale, const ToleranceConfig& tol, int max_iters,
                     std::vector<double>* trace) {
  RelaxOutcome out;
  const double eta = tol.eps_len * scale * 1e-2;
  double length = tree_length(p);
  for (int it = 1; it <= max_iters; ++it) {
    double move = project_attachments(p);
    move = std::max(move, fermat_sweep(p, tol, scale));
    double after = tree_length(p);
    move = std::max(move, joint_step(p, eta, after));
    if (it % 10 == 0 && snap_short_edges(p, 1e-3 * scale, 0.0)) {
      after = tree_length(p);
      move = scale;  // never declare convergence on a snapping iteration
    }
    out.iterations = it;
    if (trace) trace->push_back(after);
    const bool small_decrease = (length - after) <= tol.eps_len * std::max(length, scale);
    length = after;
    if (small_decrease && move <= tol.eps_len * scale) {
      out.converged = true;
      break;
    }
  }
  snap_short_edges(p, 1e-6 * scale, tol.eps_len);
  // Let attachments follow any snapped neighbour.
  for (int k = 0; k < 3; ++k) {
    project_attachments(p);
    fermat_sweep(p, tol, scale);
  }
  return out;
}

}  // namespace

RelaxOutcome relax(RelaxProblem& p, double scale, const ToleranceConfig& tol, int max_iters,
                   std::vector<double>* trace) {
  if (p.pos.empty()) {
    RelaxOutcome out;
    out.converged = true;
    return out;
  }
  if (scale <= 0.0) scale = 1.0;
  if (trace) trace->push_back(tree_length(p));
  const RelaxOutcome out = descend(p, scale, tol, max_iters, trace);

  if (p.ball.empty()) newton_polish(p, scale, 1e-7 * scale, trace);
  if (trace) trace->push_back(tree_length(p));
  return out;
}

}  // namespace steinerlab::detail

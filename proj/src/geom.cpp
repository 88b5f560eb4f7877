#include "steinerlab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace steinerlab {

DimensionMismatch::DimensionMismatch(std::size_t lhs, std::size_t rhs)
    : std::invalid_argument("dimension mismatch: " + std::to_string(lhs) + " vs " +
                            std::to_string(rhs)) {}

Point::Point(std::initializer_list<double> coords) : coords_(coords.begin(), coords.end()) {
  validate();
}

Point::Point(std::span<const double> coords) : coords_(coords.begin(), coords.end()) {
  validate();
}

Point::Point(const std::vector<double>& coords) : coords_(coords.begin(), coords.end()) {
  validate();
}

Point Point::zeros(std::size_t dim) {
  if (dim < 2) throw GeometryError("point dimension must be at least 2");
  return Point(Unchecked{}, dim);
}

void Point::validate() const {
  if (coords_.size() < 2) throw GeometryError("point dimension must be at least 2");
  for (double c : coords_) {
    if (!std::isfinite(c)) throw GeometryError("point coordinates must be finite");
  }
}

Point& Point::operator+=(const Point& o) {
  if (o.dim() != dim()) throw DimensionMismatch(dim(), o.dim());
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  if (o.dim() != dim()) throw DimensionMismatch(dim(), o.dim());
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

Point& Point::operator*=(double s) noexcept {
  for (double& c : coords_) c *= s;
  return *this;
}

Point& Point::operator/=(double s) noexcept {
  for (double& c : coords_) c /= s;
  return *this;
}

double Point::dot(const Point& o) const {
  if (o.dim() != dim()) throw DimensionMismatch(dim(), o.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) s += coords_[i] * o.coords_[i];
  return s;
}

double Point::squared_norm() const noexcept {
  double s = 0.0;
  for (double c : coords_) s += c * c;
  return s;
}

double Point::norm() const noexcept { return std::sqrt(squared_norm()); }

void ToleranceConfig::validate() const {
  if (!(eps_len > 0.0) || !(eps_angle > 0.0) || !(eps_tie > 0.0) || !(coverage_eps > 0.0)) {
    throw std::invalid_argument("tolerances must be strictly positive");
  }
  if (eps_tie < eps_len) throw std::invalid_argument("eps_tie must be >= eps_len");
}

double SegmentGraph::length() const {
  double total = 0.0;
  for (const auto& [u, v] : edges) total += distance(vertices[u], vertices[v]);
  return total;
}

double squared_distance(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

double angle_at(const Point& v, const Point& a, const Point& b) {
  Point u = a - v;
  Point w = b - v;
  const double nu = u.norm();
  const double nw = w.norm();
  if (nu == 0.0 || nw == 0.0) throw GeometryError("angle_at: degenerate ray");
  u /= nu;
  w /= nw;
  // 2*atan2(|u-w|, |u+w|) stays accurate near 0 and pi, unlike acos.
  return 2.0 * std::atan2((u - w).norm(), (u + w).norm());
}

Point fermat_point(const Point& a, const Point& b, const Point& c, const ToleranceConfig& tol) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  if (a.dim() != c.dim()) throw DimensionMismatch(a.dim(), c.dim());

  const double ab = distance(a, b);
  const double bc = distance(b, c);
  const double ca = distance(c, a);
  const double scale = std::max({ab, bc, ca});
  if (scale == 0.0) return a;
  const double tiny = tol.eps_len * scale;
  // A doubled vertex carries weight 2 >= 1 and is optimal.
  if (ab <= tiny || ca <= tiny) return a;
  if (bc <= tiny) return b;

  const double angle_a = angle_at(a, b, c);
  const double angle_b = angle_at(b, c, a);
  const double angle_c = angle_at(c, a, b);
  if (angle_a >= kTwoPiOverThree) return a;
  if (angle_b >= kTwoPiOverThree) return b;
  if (angle_c >= kTwoPiOverThree) return c;

  const double wa = bc / std::sin(angle_a + kPi / 3.0);
  const double wb = ca / std::sin(angle_b + kPi / 3.0);
  const double wc = ab / std::sin(angle_c + kPi / 3.0);
  Point f = a * wa;
  f += b * wb;
  f += c * wc;
  f /= (wa + wb + wc);
  return f;
}

Point geometric_median(std::span<const Point> points, std::span<const double> weights,
                       const ToleranceConfig& tol, int max_iters) {
  if (points.empty()) throw GeometryError("geometric_median: no points");
  if (weights.size() != points.size()) throw GeometryError("geometric_median: weight count");
  common_dimension(points);

  const double scale = std::max(diameter(points), std::numeric_limits<double>::min());
  auto objective = [&](const Point& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * distance(x, points[i]);
    return s;
  };

  // A vertex p_k is optimal iff |sum_{i!=k} w_i u_i| <= w_k.
  auto vertex_optimal = [&](std::size_t k) {
    Point pull = Point::zeros(points[k].dim());
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d = distance(points[i], points[k]);
      if (i == k || d <= tol.eps_len * scale) continue;
      pull += (points[i] - points[k]) * (weights[i] / d);
    }
    double own = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (distance(points[i], points[k]) <= tol.eps_len * scale) own += weights[i];
    }
    return pull.norm() <= own;
  };

  double wsum = 0.0;
  Point x = Point::zeros(points[0].dim());
  for (std::size_t i = 0; i < points.size(); ++i) {
    x += points[i] * weights[i];
    wsum += weights[i];
  }
  x /= wsum;

  for (int it = 0; it < max_iters; ++it) {
    Point num = Point::zeros(x.dim());
    double den = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d = distance(x, points[i]);
      if (d <= tol.eps_len * scale) {
        if (vertex_optimal(i)) return points[i];
        continue;
      }
      num += points[i] * (weights[i] / d);
      den += weights[i] / d;
    }
    if (den == 0.0) return x;
    Point next = num / den;
    const double move = distance(next, x);
    x = std::move(next);
    if (move <= tol.eps_len * scale * 1e-2) break;
  }
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (objective(points[k]) <= objective(x) && vertex_optimal(k)) return points[k];
  }
  return x;
}

SegmentProjection project_to_segment(const Point& p, const Point& s0, const Point& s1) {
  if (p.dim() != s0.dim()) throw DimensionMismatch(p.dim(), s0.dim());
  if (p.dim() != s1.dim()) throw DimensionMismatch(p.dim(), s1.dim());
  double len2 = 0.0;
  double along = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double e = s1[i] - s0[i];
    len2 += e * e;
    along += (p[i] - s0[i]) * e;
  }
  double t = len2 > 0.0 ? std::clamp(along / len2, 0.0, 1.0) : 0.0;
  double d2 = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double q = s0[i] + t * (s1[i] - s0[i]) - p[i];
    d2 += q * q;
  }
  return {t, std::sqrt(d2)};
}

double dist_point_to_segment(const Point& p, const Point& s0, const Point& s1) {
  return project_to_segment(p, s0, s1).distance;
}

Point lerp(const Point& a, const Point& b, double t) {
  Point out = a;
  out *= (1.0 - t);
  out += b * t;
  return out;
}

double diameter(std::span<const Point> points) {
  const std::size_t n = points.size();
  double best = 0.0;
  if (n <= 64) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        best = std::max(best, squared_distance(points[i], points[j]));
      }
    }
    return std::sqrt(best);
  }

  // |pq| <= |pc| + |qc|, so with points sorted by distance from the box
  // centre c the inner loop stops once that sum cannot beat the best pair.
  const std::size_t d = common_dimension(points);
  Point c = Point::zeros(d);
  for (std::size_t k = 0; k < d; ++k) {
    double lo = points[0][k], hi = points[0][k];
    for (const auto& p : points) {
      lo = std::min(lo, p[k]);
      hi = std::max(hi, p[k]);
    }
    c[k] = 0.5 * (lo + hi);
  }
  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = {distance(points[i], c), i};
  std::sort(order.begin(), order.end(), std::greater<>());

  double best_len = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (2.0 * order[a].first * (1.0 + 1e-12) < best_len) break;
    for (std::size_t b = a + 1; b < n; ++b) {
      if ((order[a].first + order[b].first) * (1.0 + 1e-12) < best_len) break;
      const double sq = squared_distance(points[order[a].second], points[order[b].second]);
      if (sq > best) {
        best = sq;
        best_len = std::sqrt(sq);
      }
    }
  }
  return std::sqrt(best);
}

Point centroid(std::span<const Point> points) {
  if (points.empty()) throw GeometryError("centroid of empty set");
  Point c = Point::zeros(points[0].dim());
  for (const auto& p : points) c += p;
  return c / static_cast<double>(points.size());
}

std::size_t common_dimension(std::span<const Point> points) {
  if (points.empty()) return 0;
  const std::size_t d = points[0].dim();
  for (const auto& p : points) {
    if (p.dim() != d) throw DimensionMismatch(d, p.dim());
  }
  return d;
}

}  // namespace steinerlab

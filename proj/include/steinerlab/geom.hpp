#pragma once

#include <boost/container/small_vector.hpp>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace steinerlab {

/// Thrown when two geometric objects of different dimension meet.
class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t lhs, std::size_t rhs);
};

/// Thrown for inputs that violate a geometric precondition (NaN coordinates,
/// zero-length rays, non-positive radii, ...).
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point (or displacement) in R^d with d >= 2.
///
/// Points built from user coordinates are validated: dimension at least two
/// and every coordinate finite. Results of arithmetic are not re-validated.
class Point {
 public:
  using Storage = boost::container::small_vector<double, 4>;

  Point(std::initializer_list<double> coords);
  explicit Point(std::span<const double> coords);
  explicit Point(const std::vector<double>& coords);

  static Point zeros(std::size_t dim);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  double& operator[](std::size_t i) noexcept { return coords_[i]; }
  std::span<const double> coords() const noexcept { return {coords_.data(), coords_.size()}; }
  std::vector<double> to_vector() const { return {coords_.begin(), coords_.end()}; }

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double s) noexcept;
  Point& operator/=(double s) noexcept;

  double dot(const Point& o) const;
  double squared_norm() const noexcept;
  double norm() const noexcept;

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend Point operator/(Point a, double s) { return a /= s; }
  friend Point operator-(Point a) { return a *= -1.0; }
  friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }

 private:
  struct Unchecked {};
  Point(Unchecked, std::size_t dim) : coords_(dim, 0.0) {}
  void validate() const;

  Storage coords_;
};

using Edge = std::pair<int, int>;

/// Tolerances shared by every solver. Lengths are relative to the instance
/// diameter unless stated otherwise.
struct ToleranceConfig {
  double eps_len = 1e-10;      ///< relative length / position tolerance
  double eps_angle = 1e-5;     ///< absolute angle tolerance (radians)
  double eps_tie = 1e-7;       ///< relative tolerance for equal lengths
  double coverage_eps = 1e-6;  ///< absolute slack for coverage tests

  /// Throws std::invalid_argument unless all tolerances are positive and
  /// eps_tie >= eps_len.
  void validate() const;

  friend bool operator==(const ToleranceConfig&, const ToleranceConfig&) = default;
};

/// Straight-edge graph embedded in R^d. Shared by trees and MDM networks.
struct SegmentGraph {
  std::vector<Point> vertices;
  std::vector<Edge> edges;

  double length() const;
  std::size_t dim() const { return vertices.empty() ? 0 : vertices.front().dim(); }

  friend bool operator==(const SegmentGraph&, const SegmentGraph&) = default;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPiOverThree = 2.0 * kPi / 3.0;

double distance(const Point& a, const Point& b);
double squared_distance(const Point& a, const Point& b);

/// Angle in [0, pi] between rays v->a and v->b. Throws GeometryError when a
/// or b coincides with v.
double angle_at(const Point& v, const Point& a, const Point& b);

/// Point minimising |xa| + |xb| + |xc|. Returns the vertex when its triangle
/// angle is at least 2pi/3 (or when two inputs coincide), otherwise the
/// interior point seeing every side under 2pi/3.
Point fermat_point(const Point& a, const Point& b, const Point& c, const ToleranceConfig& tol);

/// Weighted geometric median by Weiszfeld iteration with the vertex guard.
Point geometric_median(std::span<const Point> points, std::span<const double> weights,
                       const ToleranceConfig& tol, int max_iters = 10000);

struct SegmentProjection {
  double t = 0.0;         ///< parameter of the closest point, in [0, 1]
  double distance = 0.0;  ///< |p - closest|
};

SegmentProjection project_to_segment(const Point& p, const Point& s0, const Point& s1);
double dist_point_to_segment(const Point& p, const Point& s0, const Point& s1);
Point lerp(const Point& a, const Point& b, double t);

/// Largest pairwise distance (brute force).
double diameter(std::span<const Point> points);
Point centroid(std::span<const Point> points);

/// Throws DimensionMismatch unless every point has the same dimension; returns it.
std::size_t common_dimension(std::span<const Point> points);

}  // namespace steinerlab

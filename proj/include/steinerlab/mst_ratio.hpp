#pragma once

#include "steinerlab/steiner_solver.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace steinerlab {

struct MstResult {
  std::vector<Edge> edges;
  double length = 0.0;
};

/// Euclidean MST by Prim over all pairs; ties go to the lower index.
MstResult mst(std::span<const Point> points);

/// solve_exact length / MST length. Two coincident points give 1.
double steiner_ratio(std::span<const Point> points, const ToleranceConfig& tol,
                     int n_max = kDefaultNMax);

/// Ratio using only the caterpillar topology with terminals in input order.
/// An upper bound on the true ratio.
double restricted_ratio(std::span<const Point> points, const ToleranceConfig& tol);

/// d+1 vertices of a regular simplex with unit edges in R^d.
std::vector<Point> simplex_points(std::size_t d);

/// n points of the d-sausage (d = 2 or 3): each new point is the oldest of
/// the last d+1 points reflected through the centroid of the other d.
std::vector<Point> sausage_points(std::size_t d, int n);

struct RatioRow {
  std::string id;
  int n = 0;
  std::size_t d = 0;
  double mst_length = 0.0;
  double steiner_length = 0.0;
  double ratio = 0.0;
  bool restricted = false;
};

/// Exact when n <= n_max - 2, caterpillar-restricted otherwise.
RatioRow ratio_row(std::string id, std::span<const Point> points, const ToleranceConfig& tol,
                   int n_max = kDefaultNMax);

/// Sausage ratios for n = n_from..n_to in dimension d.
std::vector<RatioRow> sausage_scan(std::size_t d, int n_from, int n_to, const ToleranceConfig& tol,
                                   int n_max = kDefaultNMax);

void write_ratio_csv(std::ostream& out, std::span<const RatioRow> rows);

}  // namespace steinerlab

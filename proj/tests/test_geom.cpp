#include "steinerlab/geom.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace steinerlab;

namespace {

double sum_dist(const Point& x, std::span<const Point> pts) {
  double s = 0.0;
  for (const auto& p : pts) s += distance(x, p);
  return s;
}

// Coarse-to-fine grid search; an oracle that knows nothing about Fermat points.
Point grid_minimum(std::span<const Point> pts) {
  double cx = 0.0, cy = 0.0, h = 2.0;
  for (int level = 0; level < 40; ++level) {
    double best = std::numeric_limits<double>::infinity();
    double bx = cx, by = cy;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        Point q{cx + i * h / 10.0, cy + j * h / 10.0};
        double s = sum_dist(q, pts);
        if (s < best) {
          best = s;
          bx = q[0];
          by = q[1];
        }
      }
    }
    cx = bx;
    cy = by;
    h *= 0.5;
  }
  return Point{cx, cy};
}

}  // namespace

TEST(Point, RejectsLowDimensionAndNaN) {
  EXPECT_THROW(Point({1.0}), GeometryError);
  EXPECT_THROW(Point({0.0, std::nan("")}), GeometryError);
  EXPECT_THROW(Point({0.0, std::numeric_limits<double>::infinity()}), GeometryError);
  EXPECT_NO_THROW(Point({0.0, 1.0, 2.0}));
}

TEST(Point, Arithmetic) {
  Point a{1, 2, 3};
  Point b{4, 6, 3};
  EXPECT_DOUBLE_EQ(distance(a, b), 5.0);
  EXPECT_DOUBLE_EQ(squared_distance(a, b), 25.0);
  EXPECT_EQ(a + b, (Point{5, 8, 6}));
  EXPECT_EQ(b - a, (Point{3, 4, 0}));
  EXPECT_DOUBLE_EQ(a.dot(b), 4 + 12 + 9);
  EXPECT_THROW(distance(Point{0, 0}, Point{0, 0, 0}), DimensionMismatch);
}

TEST(Tolerance, Validate) {
  ToleranceConfig tol;
  EXPECT_NO_THROW(tol.validate());
  tol.eps_tie = tol.eps_len / 2;
  EXPECT_THROW(tol.validate(), std::invalid_argument);
  tol = {};
  tol.coverage_eps = 0.0;
  EXPECT_THROW(tol.validate(), std::invalid_argument);
}

TEST(AngleAt, RightAndStraight) {
  EXPECT_NEAR(angle_at(Point{0, 0}, Point{1, 0}, Point{0, 1}), kPi / 2, 1e-15);
  EXPECT_NEAR(angle_at(Point{0, 0}, Point{1, 0}, Point{-2, 0}), kPi, 1e-15);
  EXPECT_THROW(angle_at(Point{0, 0}, Point{0, 0}, Point{1, 0}), GeometryError);
}

TEST(FermatPoint, EquilateralIsCentroid) {
  const double h = std::sqrt(3.0) / 2;
  Point a{0, 0}, b{1, 0}, c{0.5, h};
  Point f = fermat_point(a, b, c, {});
  EXPECT_NEAR(f[0], 0.5, 1e-12);
  EXPECT_NEAR(f[1], h / 3, 1e-12);
}

TEST(FermatPoint, ObtuseReturnsVertex) {
  Point a{0, 0}, b{1, 0}, c{-1, 0.1};
  EXPECT_EQ(fermat_point(a, b, c, {}), a);
}

TEST(FermatPoint, MatchesGridSearchAndSeesSidesAt120) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int interior = 0;
  for (int k = 0; k < 40; ++k) {
    std::vector<Point> p{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    Point f = fermat_point(p[0], p[1], p[2], {});
    Point g = grid_minimum(p);
    EXPECT_NEAR(sum_dist(f, p), sum_dist(g, p), 1e-9);
    if (distance(f, p[0]) > 1e-9 && distance(f, p[1]) > 1e-9 && distance(f, p[2]) > 1e-9) {
      ++interior;
      EXPECT_NEAR(angle_at(f, p[0], p[1]), kTwoPiOverThree, 1e-7);
      EXPECT_NEAR(angle_at(f, p[1], p[2]), kTwoPiOverThree, 1e-7);
    }
  }
  EXPECT_GT(interior, 10);
}

TEST(FermatPoint, WorksIn3D) {
  Point a{1, 0, 0}, b{0, 1, 0}, c{0, 0, 1};
  Point f = fermat_point(a, b, c, {});
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(f[i], 1.0 / 3, 1e-12);
}

TEST(GeometricMedian, SquareCentre) {
  std::vector<Point> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<double> w(4, 1.0);
  Point m = geometric_median(pts, w, {});
  EXPECT_NEAR(m[0], 0.5, 1e-9);
  EXPECT_NEAR(m[1], 0.5, 1e-9);
}

TEST(GeometricMedian, HeavyVertexWins) {
  std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}};
  std::vector<double> w{5.0, 1.0, 1.0};
  Point m = geometric_median(pts, w, {});
  EXPECT_NEAR(distance(m, pts[0]), 0.0, 1e-9);
}

TEST(GeometricMedian, NotWorseThanGrid) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    std::vector<Point> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(Point{u(rng), u(rng)});
    std::vector<double> w(pts.size(), 1.0);
    Point m = geometric_median(pts, w, {});
    EXPECT_LE(sum_dist(m, pts), sum_dist(grid_minimum(pts), pts) + 1e-9);
  }
}

TEST(Segment, Projection) {
  auto pr = project_to_segment(Point{0.5, 2}, Point{0, 0}, Point{1, 0});
  EXPECT_DOUBLE_EQ(pr.t, 0.5);
  EXPECT_DOUBLE_EQ(pr.distance, 2.0);
  pr = project_to_segment(Point{-3, 4}, Point{0, 0}, Point{1, 0});
  EXPECT_DOUBLE_EQ(pr.t, 0.0);
  EXPECT_DOUBLE_EQ(pr.distance, 5.0);
  // Degenerate segment.
  EXPECT_DOUBLE_EQ(dist_point_to_segment(Point{3, 4}, Point{0, 0}, Point{0, 0}), 5.0);
}

TEST(Segment, DistanceIsMinimumOverParameter) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    Point p{u(rng), u(rng), u(rng)}, a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 20000; ++i) best = std::min(best, distance(p, lerp(a, b, i / 20000.0)));
    double d = dist_point_to_segment(p, a, b);
    EXPECT_LE(d, best + 1e-12);
    EXPECT_NEAR(d, best, 1e-6);
  }
}

TEST(PointSet, DiameterCentroidDimension) {
  std::vector<Point> pts{{0, 0}, {3, 0}, {0, 4}};
  EXPECT_DOUBLE_EQ(diameter(pts), 5.0);
  Point c = centroid(pts);
  EXPECT_DOUBLE_EQ(c[0], 1.0);
  EXPECT_DOUBLE_EQ(c[1], 4.0 / 3);
  EXPECT_EQ(common_dimension(pts), 2u);
  pts.push_back(Point{0, 0, 0});
  EXPECT_THROW(common_dimension(pts), DimensionMismatch);
}

TEST(SegmentGraph, Length) {
  SegmentGraph g{{{0, 0}, {3, 4}, {3, 0}}, {{0, 1}, {1, 2}}};
  EXPECT_DOUBLE_EQ(g.length(), 9.0);
  EXPECT_EQ(g.dim(), 2u);
}

TEST(PointSet, LargeDiameterMatchesBruteForce) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t d : {2u, 3u}) {
    for (int n : {65, 300, 2000}) {
      std::vector<Point> pts;
      for (int i = 0; i < n; ++i) {
        std::vector<double> c(d);
        for (auto& x : c) x = g(rng);
        pts.emplace_back(c);
      }
      double best = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) best = std::max(best, distance(pts[i], pts[j]));
      EXPECT_DOUBLE_EQ(diameter(pts), best);
    }
  }
}

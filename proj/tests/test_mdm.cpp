#include "steinerlab/mdm.hpp"
#include "steinerlab/steiner_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace steinerlab;

namespace {

// Brute-force distance from p to a polyline network by dense sampling.
double sampled_distance(const MdmNetwork& net, const Point& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : net.vertices) best = std::min(best, distance(v, p));
  for (auto [a, b] : net.edges)
    for (int i = 0; i <= 4000; ++i)
      best = std::min(best, distance(lerp(net.vertices[a], net.vertices[b], i / 4000.0), p));
  return best;
}

MdmNetwork path(std::vector<Point> pts) {
  MdmNetwork n;
  n.vertices = std::move(pts);
  for (int i = 0; i + 1 < static_cast<int>(n.vertices.size()); ++i) n.edges.push_back({i, i + 1});
  return n;
}

}  // namespace

TEST(Descriptor, Validation) {
  EXPECT_THROW(validate(Circle{0.0}), std::invalid_argument);
  EXPECT_THROW(validate(Stadium{1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(validate(Polygon{{Point{0, 0}, Point{1, 0}}}), std::invalid_argument);
  EXPECT_THROW(validate(FinitePoints{}), std::invalid_argument);
  EXPECT_NO_THROW(validate(Stadium{1.0, 2.0}));
  EXPECT_EQ(kind_name(Circle{}), "circle");
  EXPECT_EQ(kind_name(Samples{{Point{0, 0}}}), "samples");
}

TEST(Descriptor, PerimeterAndDiameter) {
  EXPECT_NEAR(perimeter(Circle{2.0}), 4.0 * kPi, 1e-12);
  EXPECT_NEAR(perimeter(Stadium{1.0, 3.0}), 6.0 + 2.0 * kPi, 1e-12);
  EXPECT_NEAR(perimeter(Polygon{{Point{0, 0}, Point{3, 0}, Point{3, 4}}}), 12.0, 1e-12);
  EXPECT_NEAR(diameter(Stadium{1.0, 3.0}), 5.0, 1e-12);
  EXPECT_NEAR(diameter(Circle{2.0}), 4.0, 1e-12);
  EXPECT_DOUBLE_EQ(perimeter(FinitePoints{{Point{0, 0}}}), 0.0);
}

TEST(Sampling, CircleSamplesLieOnCircleAndAreEvenlySpaced) {
  auto s = sample_compact(Circle{3.0}, 90);
  ASSERT_EQ(s.size(), 90u);
  EXPECT_NEAR(s[0][0], 3.0, 1e-12);
  EXPECT_NEAR(s[0][1], 0.0, 1e-12);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(s[i].norm(), 3.0, 1e-12);
    EXPECT_NEAR(distance(s[i], s[(i + 1) % s.size()]), 2 * 3.0 * std::sin(kPi / 90), 1e-12);
  }
}

TEST(Sampling, StadiumSamplesOnBoundary) {
  Stadium st{1.5, 2.0};
  for (const auto& p : sample_compact(st, 200)) {
    // Distance from the core segment equals R on the boundary.
    EXPECT_NEAR(dist_point_to_segment(p, Point{-1, 0}, Point{1, 0}), 1.5, 1e-12);
  }
  auto b = boundary_point(st, 0.0);
  EXPECT_NEAR(b[0], -1.0, 1e-12);
  EXPECT_NEAR(b[1], -1.5, 1e-12);
  EXPECT_NEAR(distance(boundary_point(st, 0.3), boundary_point(st, 0.3 + perimeter(st))), 0.0, 1e-12);
}

TEST(Sampling, DefaultDensity) {
  EXPECT_EQ(default_density(Circle{6.0}, 1.0), 480u);
  EXPECT_EQ(default_density(Circle{0.5}, 1.0), 64u);
  EXPECT_EQ(default_density(FinitePoints{{Point{0, 0}, Point{1, 1}}}, 0.1), 2u);
}

TEST(NetworkDistance, MatchesSampling) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto net = path({{0, 0}, {1, 0.5}, {1.5, -1}, {-0.5, -0.7}});
  for (int k = 0; k < 30; ++k) {
    Point p{u(rng), u(rng)};
    const double d = network_distance(net, p);
    EXPECT_LE(d, sampled_distance(net, p) + 1e-12);
    EXPECT_NEAR(d, sampled_distance(net, p), 1e-3);
  }
}

TEST(Coverage, DetectsDefect) {
  auto net = path({{-1, 0}, {1, 0}});
  std::vector<Point> m{{0, 0.5}, {2, 0}, {0, -0.9}};
  auto c = coverage_check(net, m, 1.0, {});
  EXPECT_TRUE(c.covered);
  m.push_back(Point{0, 1.5});
  c = coverage_check(net, m, 1.0, {});
  EXPECT_FALSE(c.covered);
  EXPECT_NEAR(c.max_defect, 0.5, 1e-12);
  ASSERT_TRUE(c.worst_point);
  EXPECT_EQ(*c.worst_point, (Point{0, 1.5}));
}

TEST(Coverage, ContinuousCheckFindsGapBetweenSamples) {
  // Ring of radius 2 with an arc gap; the dense check must see the defect.
  MdmNetwork net;
  const int k = 60;
  for (int i = 0; i <= k - 3; ++i) net.vertices.push_back(Point{1.0 * std::cos(2 * kPi * i / k), 1.0 * std::sin(2 * kPi * i / k)});
  for (int i = 0; i + 1 < static_cast<int>(net.vertices.size()); ++i) net.edges.push_back({i, i + 1});
  auto c = coverage_check_continuous(net, Circle{2.0}, 1.0, 64, {});
  EXPECT_FALSE(c.covered);
  // Oracle: the worst boundary point sees the network at max over a fine scan.
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    Point p{2 * std::cos(2 * kPi * i / 20000), 2 * std::sin(2 * kPi * i / 20000)};
    worst = std::max(worst, network_distance(net, p) - 1.0);
  }
  EXPECT_NEAR(c.max_defect, worst, 1e-6);
}

TEST(Horseshoe, CircleCoversAndBeatsConcentricCircle) {
  for (double R : {5.5, 6.0, 8.0}) {
    auto h = horseshoe_circle(R, 1.0, {});
    EXPECT_TRUE(h.coverage.covered) << R;
    EXPECT_LE(h.coverage.max_defect, 1e-6 * R);
    EXPECT_LT(h.analytic_length, 2 * kPi * (R - 1.0));
    EXPECT_NEAR(h.length, h.network.length(), 1e-12);
    EXPECT_NEAR(h.length, h.analytic_length, 1e-3 * h.analytic_length);
    EXPECT_GT(h.phi, 0.0);
    EXPECT_GT(h.tangent_length, 0.0);
  }
}

TEST(Horseshoe, GapIsOptimalOverScan) {
  const double R = 6.0, r = 1.0;
  auto h = horseshoe_circle(R, r, {});
  EXPECT_NEAR(horseshoe_length(R, r, 0.0, h.phi), h.analytic_length, 1e-12 * R);
  for (int i = 1; i < 2000; ++i) {
    const double phi = i * (kPi / 2) / 2000;
    EXPECT_GE(horseshoe_length(R, r, 0.0, phi), h.analytic_length - 1e-9);
  }
}

TEST(Horseshoe, StadiumReducesToCircle) {
  auto a = horseshoe_circle(6.0, 1.0, {});
  auto b = horseshoe_stadium(6.0, 1.0, 0.0, {});
  EXPECT_DOUBLE_EQ(a.analytic_length, b.analytic_length);
  auto s = horseshoe_stadium(6.0, 1.0, 3.0, {});
  // Straight parts add 2 * seg_len.
  EXPECT_NEAR(s.analytic_length, a.analytic_length + 6.0, 1e-9);
}

TEST(Horseshoe, RejectsBadRadii) {
  EXPECT_THROW(horseshoe_circle(1.0, 1.0, {}), std::invalid_argument);
  EXPECT_THROW(horseshoe_circle(2.0, -1.0, {}), std::invalid_argument);
}

TEST(FiniteMdm, Triangle) {
  // Each leaf of the Steiner tree shortens by r.
  std::vector<Point> tri{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
  auto s = solve_mdm_finite(tri, 0.1, {});
  EXPECT_NEAR(s.length, std::sqrt(3.0) - 0.3, 1e-9);
  EXPECT_TRUE(coverage_check(s.network, tri, 0.1, {}).covered);
}

TEST(FiniteMdm, TwoPoints) {
  std::vector<Point> far{{0, 0}, {3, 0}};
  EXPECT_NEAR(solve_mdm_finite(far, 1.0, {}).length, 1.0, 1e-12);
  std::vector<Point> close{{0, 0}, {1.5, 0}};
  auto s = solve_mdm_finite(close, 1.0, {});
  EXPECT_DOUBLE_EQ(s.length, 0.0);
  EXPECT_EQ(s.network.vertices.size(), 1u);
  EXPECT_TRUE(coverage_check(s.network, close, 1.0, {}).covered);
}

TEST(FiniteMdm, RandomInstancesSatisfyStructure) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ToleranceConfig tol;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 4;
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back(Point{u(rng), u(rng)});
    double mind = 1e9;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) mind = std::min(mind, distance(pts[i], pts[j]));
    const double r = 0.2 * mind;
    auto s = solve_mdm_finite(pts, r, tol);
    auto rep = verify_mdm(s.network, n, tol);
    EXPECT_TRUE(rep.connected);
    EXPECT_FALSE(rep.has_cycle);
    EXPECT_TRUE(rep.bound_ok()) << rep.segment_count;
    EXPECT_TRUE(coverage_check(s.network, pts, r, tol).covered);
    if (rep.min_angle) EXPECT_GE(*rep.min_angle, kTwoPiOverThree - 1e-5);
    // Attaching each point by a segment of length r gives a Steiner tree.
    const double steiner = solve_exact(pts, tol).best.length;
    EXPECT_LE(s.length, steiner + 1e-9);
    EXPECT_GE(s.length + n * r, steiner - 1e-9);
  }
}

TEST(VerifyMdm, MergesCollinearRuns) {
  auto net = path({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  auto rep = verify_mdm(net, 3, {});
  EXPECT_EQ(rep.segment_count, 1);
  EXPECT_EQ(rep.segment_bound, 3);
  EXPECT_TRUE(rep.connected);
  net.edges.push_back({3, 0});
  rep = verify_mdm(net, 3, {});
  EXPECT_TRUE(rep.has_cycle);
}

TEST(VerifyMdm, AnglesAtBranch) {
  const double h = std::sqrt(3.0) / 2;
  MdmNetwork y{{{0, 0}, {1, 0}, {-0.5, h}, {-0.5, -h}}, {{0, 1}, {0, 2}, {0, 3}}};
  auto rep = verify_mdm(y, 3, {});
  ASSERT_TRUE(rep.min_angle);
  EXPECT_NEAR(*rep.min_angle, kTwoPiOverThree, 1e-12);
  EXPECT_EQ(rep.segment_count, 3);
  EXPECT_TRUE(rep.bound_ok());
}

TEST(Energetic, SegmentEndpointAndWitness) {
  auto net = path({{-1, 0}, {1, 0}});
  std::vector<Point> m{{0, 1}, {3, 0}};
  auto e = energetic_points(net, m, 1.0, {});
  ASSERT_EQ(e.size(), 1u);
  EXPECT_NEAR(e[0].x[0], 0.0, 1e-12);
  EXPECT_NEAR(e[0].x[1], 0.0, 1e-12);
  EXPECT_EQ(e[0].witness, (Point{0, 1}));
}

TEST(Numeric, ImprovesPerturbedHorseshoeOnSmallCircle) {
  const double R = 5.5, r = 1.0;
  auto h = horseshoe_circle(R, r, {});
  auto init = horseshoe_network(R, r, 0.0, h.phi, 2 * kPi / 48);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : init.vertices) {
    v[0] += 0.05 * u(rng);
    v[1] += 0.05 * u(rng);
  }
  NumericConfig cfg;
  cfg.max_epochs = 8;
  std::vector<double> trace;
  cfg.trace = &trace;
  auto res = solve_mdm_numeric(Circle{R}, r, init, cfg);
  EXPECT_TRUE(res.feasible);
  EXPECT_TRUE(res.coverage.covered);
  EXPECT_NEAR(res.length, res.network.length(), 1e-12);
  EXPECT_LT(std::abs(res.length / h.length - 1.0), 0.02);
  EXPECT_FALSE(trace.empty());
}

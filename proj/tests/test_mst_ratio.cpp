#include "steinerlab/mst_ratio.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace steinerlab;

namespace {

// Kruskal with union-find, independent of the Prim implementation.
double kruskal_length(const std::vector<Point>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::tuple<double, int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(distance(pts[i], pts[j]), i, j);
  std::sort(edges.begin(), edges.end());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  double total = 0.0;
  for (auto [w, i, j] : edges) {
    int a = find(i), b = find(j);
    if (a != b) {
      parent[a] = b;
      total += w;
    }
  }
  return total;
}

}  // namespace

TEST(Mst, MatchesKruskal) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    std::vector<Point> pts;
    for (int i = 0; i < 2 + k; ++i) pts.push_back(Point{u(rng), u(rng), u(rng)});
    auto m = mst(pts);
    EXPECT_EQ(m.edges.size(), pts.size() - 1);
    EXPECT_NEAR(m.length, kruskal_length(pts), 1e-12);
  }
}

TEST(SteinerRatio, EquilateralTriangle) {
  std::vector<Point> tri{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
  EXPECT_NEAR(steiner_ratio(tri, {}), std::sqrt(3.0) / 2, 1e-9);
}

TEST(SteinerRatio, CoincidentPoints) {
  std::vector<Point> pts{{1, 1}, {1, 1}};
  EXPECT_DOUBLE_EQ(steiner_ratio(pts, {}), 1.0);
}

TEST(SteinerRatio, RandomInstancesStayAboveTriangleValue) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    std::vector<Point> pts;
    for (int i = 0; i < 3 + k % 4; ++i) pts.push_back(Point{u(rng), u(rng)});
    const double rho = steiner_ratio(pts, {});
    EXPECT_LE(rho, 1.0 + 1e-12);
    EXPECT_GE(rho, std::sqrt(3.0) / 2 - 1e-9);
    EXPECT_GE(restricted_ratio(pts, {}), rho - 1e-9);
  }
}

TEST(Simplex, UnitEdges) {
  for (std::size_t d = 2; d <= 5; ++d) {
    auto s = simplex_points(d);
    ASSERT_EQ(s.size(), d + 1);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_EQ(s[i].dim(), d);
      for (std::size_t j = i + 1; j < s.size(); ++j) EXPECT_NEAR(distance(s[i], s[j]), 1.0, 1e-12);
    }
  }
}

TEST(Simplex, TetrahedronRatio) {
  // Closed form (sqrt3 + 1/sqrt2) / 3 for the regular tetrahedron.
  auto tet = simplex_points(3);
  const double expected = (std::sqrt(3.0) + 1.0 / std::sqrt(2.0)) / 3.0;
  const double rho = steiner_ratio(tet, {});
  EXPECT_NEAR(rho, expected, 1e-8);
  EXPECT_LT(rho, std::sqrt(3.0) / 2);
}

TEST(Sausage, ConsecutiveWindowsAreRegularSimplices) {
  for (std::size_t d : {2u, 3u}) {
    auto s = sausage_points(d, 9);
    ASSERT_EQ(s.size(), 9u);
    for (std::size_t i = 0; i + d < s.size(); ++i)
      for (std::size_t a = i; a <= i + d; ++a)
        for (std::size_t b = a + 1; b <= i + d; ++b) EXPECT_NEAR(distance(s[a], s[b]), 1.0, 1e-9);
  }
}

TEST(Sausage, PlanarSausageIsTriangularStrip) {
  // The 2-sausage is a strip of the triangular lattice: MST length n - 1.
  auto s = sausage_points(2, 7);
  EXPECT_NEAR(mst(s).length, 6.0, 1e-9);
}

TEST(Sausage, ScanRows) {
  auto rows = sausage_scan(3, 4, 5, {});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].n, 4);
  EXPECT_EQ(rows[1].d, 3u);
  EXPECT_NEAR(rows[0].ratio, (std::sqrt(3.0) + 1.0 / std::sqrt(2.0)) / 3.0, 1e-8);
  for (const auto& r : rows) EXPECT_NEAR(r.ratio, r.steiner_length / r.mst_length, 1e-15);
}

TEST(RatioRow, RestrictedAboveNMax) {
  auto pts = sausage_points(3, 6);
  auto row = ratio_row("s6", pts, {}, 7);
  EXPECT_TRUE(row.restricted);
  EXPECT_NEAR(row.ratio, restricted_ratio(pts, {}), 1e-12);
}

TEST(RatioCsv, Format) {
  std::vector<RatioRow> rows{{"tri", 3, 2, 2.0, std::sqrt(3.0), std::sqrt(3.0) / 2, false}};
  std::ostringstream os;
  write_ratio_csv(os, rows);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "id,n,d,mst_length,steiner_length,ratio,restricted_flag");
  EXPECT_NE(s.find("tri,3,2,2,"), std::string::npos);
  EXPECT_EQ(s.back(), '\n');
}

#include "steinerlab/mst_ratio.hpp"

#include "format.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace steinerlab {

MstResult mst(std::span<const Point> points) {
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("mst: need at least two points");
  common_dimension(points);

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> key(n, inf);
  std::vector<int> from(n, -1);
  std::vector<char> done(n, 0);
  key[0] = 0.0;
  MstResult out;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && (best == n || key[v] < key[best])) best = v;
    }
    done[best] = 1;
    if (from[best] >= 0) {
      out.edges.push_back({from[best], static_cast<int>(best)});
      out.length += key[best];
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      const double d = distance(points[best], points[v]);
      if (d < key[v]) {
        key[v] = d;
        from[v] = static_cast<int>(best);
      }
    }
  }
  return out;
}

double steiner_ratio(std::span<const Point> points, const ToleranceConfig& tol, int n_max) {
  const double m = mst(points).length;
  if (m == 0.0) return 1.0;
  return solve_exact(points, tol, n_max).best.length / m;
}

double restricted_ratio(std::span<const Point> points, const ToleranceConfig& tol) {
  const double m = mst(points).length;
  if (m == 0.0) return 1.0;
  const int n = static_cast<int>(points.size());
  return relax_topology(points, caterpillar_topology(n), tol).length / m;
}

std::vector<Point> simplex_points(std::size_t d) {
  if (d < 2) throw std::invalid_argument("simplex_points: d must be >= 2");
  std::vector<Point> pts{Point::zeros(d)};
  for (std::size_t k = 1; k <= d; ++k) {
    Point c = centroid(pts);
    const double circum2 = squared_distance(c, pts[0]);
    c[k - 1] = std::sqrt(1.0 - circum2);
    pts.push_back(c);
  }
  return pts;
}

std::vector<Point> sausage_points(std::size_t d, int n) {
  if (d != 2 && d != 3) throw std::invalid_argument("sausage_points: d must be 2 or 3");
  if (n < static_cast<int>(d) + 1) throw std::invalid_argument("sausage_points: n must be >= d+1");
  std::vector<Point> pts = simplex_points(d);
  while (static_cast<int>(pts.size()) < n) {
    const std::size_t k = pts.size();
    const std::span<const Point> face(pts.data() + (k - d), d);
    pts.push_back(centroid(face) * 2.0 - pts[k - d - 1]);
  }
  return pts;
}

RatioRow ratio_row(std::string id, std::span<const Point> points, const ToleranceConfig& tol,
                   int n_max) {
  RatioRow row;
  row.id = std::move(id);
  row.n = static_cast<int>(points.size());
  row.d = common_dimension(points);
  row.mst_length = mst(points).length;
  row.restricted = row.n > n_max - 2;
  row.steiner_length =
      row.restricted ? relax_topology(points, caterpillar_topology(row.n), tol).length
                     : solve_exact(points, tol, n_max).best.length;
  row.ratio = row.mst_length > 0.0 ? row.steiner_length / row.mst_length : 1.0;
  return row;
}

std::vector<RatioRow> sausage_scan(std::size_t d, int n_from, int n_to, const ToleranceConfig& tol,
                                   int n_max) {
  std::vector<RatioRow> rows;
  for (int n = n_from; n <= n_to; ++n) {
    const auto pts = sausage_points(d, n);
    rows.push_back(ratio_row("sausage-d" + std::to_string(d) + "-n" + std::to_string(n), pts, tol,
                             n_max));
  }
  return rows;
}

void write_ratio_csv(std::ostream& out, std::span<const RatioRow> rows) {
  out << "id,n,d,mst_length,steiner_length,ratio,restricted_flag\n";
  for (const auto& r : rows) {
    out << r.id << ',' << r.n << ',' << r.d << ',' << detail::fmt_double(r.mst_length) << ','
        << detail::fmt_double(r.steiner_length) << ',' << detail::fmt_double(r.ratio) << ','
        << (r.restricted ? 1 : 0) << '\n';
  }
}

}  // namespace steinerlab

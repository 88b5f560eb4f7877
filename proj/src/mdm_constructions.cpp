#include "steinerlab/mdm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace steinerlab {
namespace {

constexpr double kGolden = 0.6180339887498949;

// Minimiser of f on [lo, hi], assumed unimodal there.
template <class F>
double golden_min(F f, double lo, double hi) {
  double a = hi - kGolden * (hi - lo);
  double b = lo + kGolden * (hi - lo);
  double fa = f(a);
  double fb = f(b);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - kGolden * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + kGolden * (hi - lo);
      fb = f(b);
    }
  }
  return fa <= fb ? a : b;
}

// Dense scan followed by a golden-section refinement around the best node.
template <class F>
double scan_min(F f, double lo, double hi, int nodes = 256) {
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= nodes; ++k) {
    const double v = f(lo + (hi - lo) * k / nodes);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  const double a = lo + (hi - lo) * std::max(0, best - 1) / nodes;
  const double b = lo + (hi - lo) * std::min(nodes, best + 1) / nodes;
  const double x = golden_min(f, a, b);
  const double x0 = lo + (hi - lo) * best / nodes;
  return f(x) <= best_val ? x : x0;
}

void check_radii(double R, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw GeometryError("horseshoe: r must be > 0");
  if (!(R > r) || !std::isfinite(R)) throw GeometryError("horseshoe: infeasible parameters, need R > r");
}

double phi_limit(double R, double r, double seg_len) {
  const double rho = R - r;
  const double c = std::clamp((rho - r) / R, -1.0, 1.0);
  return std::min(seg_len > 0.0 ? kPi / 2 : kPi, std::acos(c));
}

// Largest chord angle whose sag stays below min(1e-7 rho, coverage_eps / 2).
double chord_angle(double rho, const ToleranceConfig& tol) {
  const double sag = std::min(1e-7 * rho, 0.5 * tol.coverage_eps);
  return std::sqrt(8.0 * sag / rho);
}

void append_arc(std::vector<Point>& path, const Point& center, double rho, double a0, double a1,
                double max_chord) {
  if (a1 <= a0) {
    path.push_back(Point{center[0] + rho * std::cos(a0), center[1] + rho * std::sin(a0)});
    return;
  }
  const int m = std::max(1, static_cast<int>(std::ceil((a1 - a0) / max_chord)));
  for (int k = 0; k <= m; ++k) {
    const double a = a0 + (a1 - a0) * k / m;
    path.push_back(Point{center[0] + rho * std::cos(a), center[1] + rho * std::sin(a)});
  }
}

MdmNetwork path_network(const std::vector<Point>& path) {
  MdmNetwork net;
  for (const auto& p : path) {
    if (!net.vertices.empty() && distance(net.vertices.back(), p) == 0.0) continue;
    net.vertices.push_back(p);
    const int n = static_cast<int>(net.vertices.size());
    if (n >= 2) net.edges.push_back({n - 2, n - 1});
  }
  return net;
}

}  // namespace

std::optional<double> horseshoe_tangent_length(double R, double r, double phi) {
  check_radii(R, r);
  if (phi < 0.0 || phi > kPi) return std::nullopt;
  const double rho = R - r;
  if (R * std::cos(phi) - rho < -r * (1.0 + 1e-12)) return std::nullopt;
  // A gap point seen at angle beta from the arc end needs the tangent to
  // reach g(beta).
  auto neg_g = [&](double beta) {
    const double h = R * std::cos(beta) - rho;
    return -(R * std::sin(beta) - std::sqrt(std::max(0.0, r * r - h * h)));
  };
  if (phi == 0.0) return 0.0;
  const double beta = scan_min(neg_g, 0.0, phi, 128);
  return std::max(0.0, -neg_g(beta));
}

double horseshoe_length(double R, double r, double seg_len, double phi) {
  check_radii(R, r);
  if (seg_len > 0.0 && phi > kPi / 2) return std::numeric_limits<double>::infinity();
  const auto ell = horseshoe_tangent_length(R, r, phi);
  if (!ell) return std::numeric_limits<double>::infinity();
  return 2.0 * seg_len + (R - r) * (2.0 * kPi - 2.0 * phi) + 2.0 * *ell;
}

MdmNetwork horseshoe_network(double R, double r, double seg_len, double phi,
                             double max_chord_angle) {
  check_radii(R, r);
  const auto ell = horseshoe_tangent_length(R, r, phi);
  if (!ell || (seg_len > 0.0 && phi > kPi / 2)) {
    throw GeometryError("horseshoe_network: gap angle is infeasible");
  }
  const double rho = R - r;
  const double h = seg_len / 2;
  std::vector<Point> path;
  const Point right{h, 0.0};
  const Point left{-h, 0.0};
  const Point a_plus{h + rho * std::cos(phi), rho * std::sin(phi)};
  const Point a_minus{h + rho * std::cos(phi), -rho * std::sin(phi)};
  if (*ell > 0.0) path.push_back(a_plus + Point{std::sin(phi), -std::cos(phi)} * *ell);
  if (seg_len > 0.0) {
    append_arc(path, right, rho, phi, kPi / 2, max_chord_angle);
    append_arc(path, left, rho, kPi / 2, 3 * kPi / 2, max_chord_angle);
    append_arc(path, right, rho, 3 * kPi / 2, 2 * kPi - phi, max_chord_angle);
  } else {
    append_arc(path, right, rho, phi, 2 * kPi - phi, max_chord_angle);
  }
  if (*ell > 0.0) path.push_back(a_minus + Point{std::sin(phi), std::cos(phi)} * *ell);
  return path_network(path);
}

HorseshoeResult horseshoe_stadium(double R, double r, double seg_len, const ToleranceConfig& tol) {
  check_radii(R, r);
  if (!(seg_len >= 0.0) || !std::isfinite(seg_len)) {
    throw GeometryError("horseshoe_stadium: seg_len must be >= 0");
  }
  tol.validate();
  HorseshoeResult res;
  const double hi = phi_limit(R, r, seg_len);
  res.phi = scan_min([&](double phi) { return horseshoe_length(R, r, seg_len, phi); }, 0.0, hi);
  res.tangent_length = *horseshoe_tangent_length(R, r, res.phi);
  res.analytic_length = horseshoe_length(R, r, seg_len, res.phi);
  res.network = horseshoe_network(R, r, seg_len, res.phi, chord_angle(R - r, tol));
  res.length = res.network.length();
  const CompactSetDescriptor desc = Stadium{R, seg_len};
  const auto samples = sample_compact(desc, 40 * default_density(desc, r));
  res.coverage = coverage_check(res.network, samples, r, tol);
  return res;
}

HorseshoeResult horseshoe_circle(double R, double r, const ToleranceConfig& tol) {
  return horseshoe_stadium(R, r, 0.0, tol);
}

MdmNetwork stadium_competitor_init(double R, double r, double seg_len, int arc_segments) {
  check_radii(R, r);
  const double rho = R - r;
  const double h = seg_len / 2;
  const double w = std::max(seg_len, rho);
  const double step = kPi / std::max(arc_segments, 1);

  MdmNetwork net;
  auto add = [&](Point p) {
    net.vertices.push_back(std::move(p));
    return static_cast<int>(net.vertices.size()) - 1;
  };
  auto chain = [&](int from, int to) { net.edges.push_back({from, to}); };

  // Left C from the top of the left cap round to its bottom.
  int prev = -1;
  for (int k = 0; k <= arc_segments; ++k) {
    const double a = kPi / 2 + step * k;
    const int v = add(Point{-h + rho * std::cos(a), rho * std::sin(a)});
    if (prev >= 0) chain(prev, v);
    prev = v;
  }
  const int a = add(Point{-0.3 * w, -rho});
  chain(prev, a);
  const int c1 = add(Point{0.0, -0.8 * rho});
  chain(a, c1);
  const int b = add(Point{0.3 * w, -rho});
  chain(c1, b);
  prev = b;
  for (int k = 0; k <= arc_segments; ++k) {
    const double ang = -kPi / 2 + step * k;
    const int v = add(Point{h + rho * std::cos(ang), rho * std::sin(ang)});
    chain(prev, v);
    prev = v;
  }
  const int c2 = add(Point{0.0, 0.8 * rho});
  chain(c1, c2);
  chain(c2, add(Point{-0.25 * w, 1.4 * rho}));
  chain(c2, add(Point{0.25 * w, 1.4 * rho}));
  return net;
}

NumericResult stadium_competitor(double R, double r, double seg_len, const ToleranceConfig& tol) {
  NumericConfig cfg;
  cfg.tol = tol;
  cfg.topology_moves = false;
  return solve_mdm_numeric(Stadium{R, seg_len}, r, stadium_competitor_init(R, r, seg_len), cfg);
}

}  // namespace steinerlab

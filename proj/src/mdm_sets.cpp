#include "steinerlab/mdm.hpp"
#include "steinerlab/steiner_solver.hpp"

#include "mdm_internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace steinerlab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void validate(const CompactSetDescriptor& desc) {
  std::visit(overloaded{
                 [](const Circle& c) { require(std::isfinite(c.R) && c.R > 0.0, "circle: R must be > 0"); },
                 [](const Stadium& s) {
                   require(std::isfinite(s.R) && s.R > 0.0, "stadium: R must be > 0");
                   require(std::isfinite(s.seg_len) && s.seg_len >= 0.0,
                           "stadium: seg_len must be >= 0");
                 },
                 [](const Polygon& p) {
                   require(p.vertices.size() >= 3, "polygon: need at least 3 vertices");
                   common_dimension(p.vertices);
                 },
                 [](const FinitePoints& p) {
                   require(!p.points.empty(), "points: need at least one point");
                   common_dimension(p.points);
                 },
                 [](const Samples& p) {
                   require(!p.points.empty(), "samples: need at least one point");
                   common_dimension(p.points);
                 },
             },
             desc);
}

std::string kind_name(const CompactSetDescriptor& desc) {
  return std::visit(overloaded{
                        [](const Circle&) { return std::string("circle"); },
                        [](const Stadium&) { return std::string("stadium"); },
                        [](const Polygon&) { return std::string("polygon"); },
                        [](const FinitePoints&) { return std::string("points"); },
                        [](const Samples&) { return std::string("samples"); },
                    },
                    desc);
}

double diameter(const CompactSetDescriptor& desc) {
  return std::visit(overloaded{
                        [](const Circle& c) { return 2.0 * c.R; },
                        [](const Stadium& s) { return s.seg_len + 2.0 * s.R; },
                        [](const Polygon& p) { return diameter(p.vertices); },
                        [](const FinitePoints& p) { return diameter(p.points); },
                        [](const Samples& p) { return diameter(p.points); },
                    },
                    desc);
}

std::size_t dimension(const CompactSetDescriptor& desc) {
  return std::visit(overloaded{
                        [](const Circle&) -> std::size_t { return 2; },
                        [](const Stadium&) -> std::size_t { return 2; },
                        [](const Polygon& p) { return common_dimension(p.vertices); },
                        [](const FinitePoints& p) { return common_dimension(p.points); },
                        [](const Samples& p) { return common_dimension(p.points); },
                    },
                    desc);
}

double perimeter(const CompactSetDescriptor& desc) {
  return std::visit(overloaded{
                        [](const Circle& c) { return 2.0 * kPi * c.R; },
                        [](const Stadium& s) { return 2.0 * s.seg_len + 2.0 * kPi * s.R; },
                        [](const Polygon& p) {
                          double len = 0.0;
                          const std::size_t m = p.vertices.size();
                          for (std::size_t i = 0; i < m; ++i) {
                            len += distance(p.vertices[i], p.vertices[(i + 1) % m]);
                          }
                          return len;
                        },
                        [](const FinitePoints&) { return 0.0; },
                        [](const Samples&) { return 0.0; },
                    },
                    desc);
}

namespace {

Point stadium_point(const Stadium& st, double s) {
  const double L = st.seg_len;
  const double R = st.R;
  if (s < L) return Point{-L / 2 + s, -R};
  s -= L;
  if (s < kPi * R) {
    const double a = -kPi / 2 + s / R;
    return Point{L / 2 + R * std::cos(a), R * std::sin(a)};
  }
  s -= kPi * R;
  if (s < L) return Point{L / 2 - s, R};
  s -= L;
  const double a = kPi / 2 + s / R;
  return Point{-L / 2 + R * std::cos(a), R * std::sin(a)};
}

Point polygon_point(const Polygon& poly, double s) {
  const auto& v = poly.vertices;
  const std::size_t m = v.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double len = distance(v[i], v[(i + 1) % m]);
    if (s < len || i + 1 == m) return lerp(v[i], v[(i + 1) % m], len > 0.0 ? std::min(1.0, s / len) : 0.0);
    s -= len;
  }
  return v.front();
}

}  // namespace

Point boundary_point(const CompactSetDescriptor& desc, double s) {
  const double per = perimeter(desc);
  if (per <= 0.0) throw std::invalid_argument("boundary_point: descriptor has no boundary curve");
  s = std::fmod(s, per);
  if (s < 0.0) s += per;
  return std::visit(overloaded{
                        [s](const Circle& c) {
                          const double a = s / c.R;
                          return Point{c.R * std::cos(a), c.R * std::sin(a)};
                        },
                        [s](const Stadium& st) { return stadium_point(st, s); },
                        [s](const Polygon& p) { return polygon_point(p, s); },
                        [](const FinitePoints& p) { return p.points.front(); },
                        [](const Samples& p) { return p.points.front(); },
                    },
                    desc);
}

std::vector<Point> sample_compact(const CompactSetDescriptor& desc, std::size_t density) {
  validate(desc);
  if (density == 0) throw std::invalid_argument("sample_compact: density must be positive");
  if (const auto* p = std::get_if<FinitePoints>(&desc)) return p->points;
  if (const auto* p = std::get_if<Samples>(&desc)) return p->points;
  const double per = perimeter(desc);
  std::vector<Point> out;
  out.reserve(density);
  for (std::size_t k = 0; k < density; ++k) {
    out.push_back(boundary_point(desc, per * static_cast<double>(k) / static_cast<double>(density)));
  }
  return out;
}

std::size_t default_density(const CompactSetDescriptor& desc, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("default_density: r must be > 0");
  if (const auto* p = std::get_if<FinitePoints>(&desc)) return p->points.size();
  if (const auto* p = std::get_if<Samples>(&desc)) return p->points.size();
  const double n = std::ceil(40.0 * diameter(desc) / r);
  return std::max<std::size_t>(64, static_cast<std::size_t>(n));
}

double network_distance(const MdmNetwork& net, const Point& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : net.vertices) best = std::min(best, distance(p, v));
  for (const auto& [u, v] : net.edges) {
    best = std::min(best, dist_point_to_segment(p, net.vertices[u], net.vertices[v]));
  }
  return best;
}

CoverageReport coverage_check(const MdmNetwork& net, std::span<const Point> m_samples, double r,
                              const ToleranceConfig& tol) {
  if (!(r > 0.0)) throw std::invalid_argument("coverage_check: r must be > 0");
  if (net.vertices.empty()) throw std::invalid_argument("coverage_check: empty network");
  CoverageReport rep;
  if (m_samples.empty()) {
    rep.covered = true;
    return rep;
  }
  rep.max_defect = -std::numeric_limits<double>::infinity();
  for (const auto& m : m_samples) {
    const double defect = network_distance(net, m) - r;
    if (defect > rep.max_defect) {
      rep.max_defect = defect;
      rep.worst_point = m;
    }
  }
  rep.covered = rep.max_defect <= tol.coverage_eps;
  return rep;
}

namespace detail {

std::vector<DefectPeak> defect_peaks(const MdmNetwork& net, const CompactSetDescriptor& desc,
                                     double r, std::size_t density) {
  const double per = perimeter(desc);
  const auto samples = sample_compact(desc, density);
  const std::size_t n = samples.size();
  std::vector<double> defect(n);
  for (std::size_t i = 0; i < n; ++i) defect[i] = network_distance(net, samples[i]) - r;
  std::vector<DefectPeak> peaks;
  if (per <= 0.0) {
    for (std::size_t i = 0; i < n; ++i) peaks.push_back({samples[i], defect[i]});
    return peaks;
  }
  const double h = per / static_cast<double>(n);
  auto neg = [&](double s) { return -(network_distance(net, boundary_point(desc, s)) - r); };
  for (std::size_t i = 0; i < n; ++i) {
    if (defect[i] < defect[(i + n - 1) % n] || defect[i] < defect[(i + 1) % n]) continue;
    double lo = h * static_cast<double>(i) - h;
    double hi = lo + 2.0 * h;
    constexpr double g = 0.6180339887498949;
    double a = hi - g * (hi - lo);
    double b = lo + g * (hi - lo);
    double fa = neg(a);
    double fb = neg(b);
    while (hi - lo > 1e-13 * std::max(1.0, per)) {
      if (fa <= fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - g * (hi - lo);
        fa = neg(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + g * (hi - lo);
        fb = neg(b);
      }
    }
    const double best = -std::min(fa, fb);
    if (best > defect[i]) {
      peaks.push_back({boundary_point(desc, fa <= fb ? a : b), best});
    } else {
      peaks.push_back({samples[i], defect[i]});
    }
  }
  return peaks;
}

}  // namespace detail

CoverageReport coverage_check_continuous(const MdmNetwork& net, const CompactSetDescriptor& desc,
                                         double r, std::size_t density,
                                         const ToleranceConfig& tol) {
  validate(desc);
  if (!(r > 0.0)) throw std::invalid_argument("coverage_check: r must be > 0");
  if (net.vertices.empty()) throw std::invalid_argument("coverage_check: empty network");
  CoverageReport rep;
  rep.max_defect = -std::numeric_limits<double>::infinity();
  for (auto& pk : detail::defect_peaks(net, desc, r, density)) {
    if (pk.defect > rep.max_defect) {
      rep.max_defect = pk.defect;
      rep.worst_point = std::move(pk.point);
    }
  }
  rep.covered = rep.max_defect <= tol.coverage_eps;
  return rep;
}

std::vector<EnergeticPoint> energetic_points(const MdmNetwork& net,
                                             std::span<const Point> m_samples, double r,
                                             const ToleranceConfig& tol, double rel_band) {
  if (net.vertices.empty()) return {};
  double diam = diameter(net.vertices);
  if (diam == 0.0) diam = diameter(m_samples);
  const double dedupe = tol.eps_len * std::max(diam, r);

  std::vector<EnergeticPoint> out;
  for (const auto& y : m_samples) {
    double best = std::numeric_limits<double>::infinity();
    Point x = net.vertices.front();
    for (const auto& v : net.vertices) {
      const double d = distance(y, v);
      if (d < best) {
        best = d;
        x = v;
      }
    }
    for (const auto& [a, b] : net.edges) {
      const auto proj = project_to_segment(y, net.vertices[a], net.vertices[b]);
      if (proj.distance < best) {
        best = proj.distance;
        x = lerp(net.vertices[a], net.vertices[b], proj.t);
      }
    }
    if (best < r - rel_band * r || best > r + tol.coverage_eps) continue;
    const bool seen = std::any_of(out.begin(), out.end(), [&](const EnergeticPoint& e) {
      return distance(e.x, x) <= dedupe;
    });
    if (!seen) out.push_back({std::move(x), y});
  }
  return out;
}

MdmReport verify_mdm(const MdmNetwork& net, int m_count, const ToleranceConfig& tol) {
  MdmReport rep;
  if (m_count >= 2) rep.segment_bound = 2 * m_count - 3;
  if (net.vertices.empty()) return rep;

  const double threshold = tol.eps_len * diameter(net.vertices);
  const auto c = contract_degenerate(net, 0, threshold);
  const int n = static_cast<int>(c.nodes.size());

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int edges = 0;
  int components = n;
  for (int v = 0; v < n; ++v) {
    for (int w : c.adj[v]) {
      if (w < v) continue;
      ++edges;
      const int a = find(v);
      const int b = find(w);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
  }
  rep.connected = components == 1;
  rep.has_cycle = edges > n - components;

  int collinear = 0;
  for (int v = 0; v < n; ++v) {
    const auto& nb = c.adj[v];
    if (nb.size() < 2) continue;
    double smallest = kPi;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        smallest = std::min(smallest, angle_at(c.nodes[v], c.nodes[nb[i]], c.nodes[nb[j]]));
      }
    }
    rep.angles.push_back(smallest);
    rep.min_angle = rep.min_angle ? std::min(*rep.min_angle, smallest) : smallest;
    if (nb.size() == 2 && smallest >= kPi - tol.eps_angle) ++collinear;
  }
  rep.segment_count = edges - collinear;
  return rep;
}

}  // namespace steinerlab

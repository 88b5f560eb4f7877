#include "steinerlab/svg.hpp"

#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace steinerlab {
namespace {

struct Frame {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  double scale = 1.0;
  double margin = 20.0;

  void include(double x, double y, double pad = 0.0) {
    min_x = std::min(min_x, x - pad);
    max_x = std::max(max_x, x + pad);
    min_y = std::min(min_y, y - pad);
    max_y = std::max(max_y, y + pad);
  }
  // SVG y grows downwards.
  double px(double v) const { return margin + (v - min_x) * scale; }
  double py(double v) const { return margin + (max_y - v) * scale; }
  std::string x(double v) const { return detail::fmt_fixed(px(v), 3); }
  std::string y(double v) const { return detail::fmt_fixed(py(v), 3); }
  std::string len(double v) const { return detail::fmt_fixed(v * scale, 3); }
};

std::vector<Point> set_points(const CompactSetDescriptor& desc) {
  if (const auto* f = std::get_if<FinitePoints>(&desc)) return f->points;
  if (const auto* s = std::get_if<Samples>(&desc)) return s->points;
  return sample_compact(desc, 720);
}

bool is_curve(const CompactSetDescriptor& desc) {
  return std::holds_alternative<Circle>(desc) || std::holds_alternative<Stadium>(desc) ||
         std::holds_alternative<Polygon>(desc);
}

}  // namespace

SvgOutput render_svg(const ResultFile& result, const SvgOptions& options) {
  SvgOutput out;
  const auto& g = result.network;
  const std::size_t dim = g.vertices.empty() ? 2 : g.vertices.front().dim();
  if (dim > 2) {
    if (!options.project) {
      throw UnsupportedDimension("render_svg: dimension " + std::to_string(dim) +
                                 " needs the projection option");
    }
    out.warnings.push_back("orthographic projection onto the first two axes");
  }

  std::vector<Point> m_points;
  if (result.set) m_points = set_points(*result.set);
  const double r = result.r.value_or(0.0);

  Frame f;
  for (const auto& p : g.vertices) f.include(p[0], p[1], r);
  for (const auto& p : m_points) f.include(p[0], p[1]);
  if (!std::isfinite(f.min_x)) f.include(0.0, 0.0);
  const double span = std::max({f.max_x - f.min_x, f.max_y - f.min_y, 1e-12});
  f.scale = (options.width - 2 * f.margin) / span;
  const double w = 2 * f.margin + (f.max_x - f.min_x) * f.scale;
  const double h = 2 * f.margin + (f.max_y - f.min_y) * f.scale;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt_fixed(w, 3) << "\" height=\""
    << detail::fmt_fixed(h, 3) << "\" viewBox=\"0 0 " << detail::fmt_fixed(w, 3) << ' '
    << detail::fmt_fixed(h, 3) << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (result.set && is_curve(*result.set) && !m_points.empty()) {
    s << "<polygon class=\"set\" fill=\"none\" stroke=\"#777\" stroke-dasharray=\"6 4\" points=\"";
    for (std::size_t i = 0; i < m_points.size(); ++i) {
      s << (i ? " " : "") << f.x(m_points[i][0]) << ',' << f.y(m_points[i][1]);
    }
    s << "\"/>\n";
  }

  if (r > 0.0) {
    // Outline of the r-neighbourhood as a union of capsules.
    s << "<g class=\"tube\" fill=\"none\" stroke=\"#39c\" stroke-width=\"0.8\" stroke-dasharray=\"3 3\">\n";
    if (g.edges.empty()) {
      for (const auto& p : g.vertices) {
        s << "<circle cx=\"" << f.x(p[0]) << "\" cy=\"" << f.y(p[1]) << "\" r=\"" << f.len(r) << "\"/>\n";
      }
    }
    for (auto [a, b] : g.edges) {
      const Point& p = g.vertices[a];
      const Point& q = g.vertices[b];
      const double dx = q[0] - p[0], dy = q[1] - p[1];
      const double len = std::hypot(dx, dy);
      if (len == 0.0) {
        s << "<circle cx=\"" << f.x(p[0]) << "\" cy=\"" << f.y(p[1]) << "\" r=\"" << f.len(r) << "\"/>\n";
        continue;
      }
      const double nx = -dy / len * r, ny = dx / len * r;
      s << "<path d=\"M " << f.x(p[0] + nx) << ' ' << f.y(p[1] + ny) << " L " << f.x(q[0] + nx) << ' '
        << f.y(q[1] + ny) << " A " << f.len(r) << ' ' << f.len(r) << " 0 0 1 " << f.x(q[0] - nx) << ' '
        << f.y(q[1] - ny) << " L " << f.x(p[0] - nx) << ' ' << f.y(p[1] - ny) << " A " << f.len(r) << ' '
        << f.len(r) << " 0 0 1 " << f.x(p[0] + nx) << ' ' << f.y(p[1] + ny) << "\"/>\n";
    }
    s << "</g>\n";
  }

  s << "<g class=\"edges\" stroke=\"black\" stroke-width=\"2.5\" stroke-linecap=\"round\">\n";
  for (auto [a, b] : g.edges) {
    s << "<path d=\"M " << f.x(g.vertices[a][0]) << ' ' << f.y(g.vertices[a][1]) << " L "
      << f.x(g.vertices[b][0]) << ' ' << f.y(g.vertices[b][1]) << "\"/>\n";
  }
  s << "</g>\n";

  std::vector<int> degree(g.vertices.size(), 0);
  for (auto [a, b] : g.edges) {
    ++degree[a];
    ++degree[b];
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const bool terminal = static_cast<int>(v) < result.n_terminals;
    if (!terminal && degree[v] < 3) continue;
    s << "<circle class=\"" << (terminal ? "terminal" : "branch") << "\" cx=\"" << f.x(g.vertices[v][0])
      << "\" cy=\"" << f.y(g.vertices[v][1]) << "\" r=\"4\" "
      << (terminal ? "fill=\"black\"" : "fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"") << "/>\n";
  }
  if (result.set && !is_curve(*result.set)) {
    for (const auto& p : m_points) {
      s << "<circle class=\"terminal\" cx=\"" << f.x(p[0]) << "\" cy=\"" << f.y(p[1])
        << "\" r=\"3\" fill=\"#c33\"/>\n";
    }
  }
  for (const auto& e : result.report.energetic) {
    s << "<rect class=\"energetic\" x=\"" << detail::fmt_fixed(f.px(e.x[0]) - 3.0, 3) << "\" y=\""
      << detail::fmt_fixed(f.py(e.x[1]) - 3.0, 3)
      << "\" width=\"6\" height=\"6\" fill=\"#e80\"/>\n";
  }
  s << "</svg>\n";
  out.svg = s.str();
  return out;
}

}  // namespace steinerlab

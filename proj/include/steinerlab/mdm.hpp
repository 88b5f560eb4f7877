#pragma once

#include "steinerlab/geom.hpp"
#include "steinerlab/topology.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace steinerlab {

/// Circle of radius R about the origin.
struct Circle {
  double R = 1.0;
  friend bool operator==(const Circle&, const Circle&) = default;
};

/// Boundary of the R-neighbourhood of the segment [(-L/2,0), (L/2,0)].
struct Stadium {
  double R = 1.0;
  double seg_len = 0.0;
  friend bool operator==(const Stadium&, const Stadium&) = default;
};

/// Closed polygonal boundary.
struct Polygon {
  std::vector<Point> vertices;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

struct FinitePoints {
  std::vector<Point> points;
  friend bool operator==(const FinitePoints&, const FinitePoints&) = default;
};

/// Raw samples of some compact set, used as given.
struct Samples {
  std::vector<Point> points;
  friend bool operator==(const Samples&, const Samples&) = default;
};

using CompactSetDescriptor = std::variant<Circle, Stadium, Polygon, FinitePoints, Samples>;

/// Throws std::invalid_argument naming the offending parameter.
void validate(const CompactSetDescriptor& desc);
std::string kind_name(const CompactSetDescriptor& desc);
double diameter(const CompactSetDescriptor& desc);
std::size_t dimension(const CompactSetDescriptor& desc);

/// Deterministic arc-length-uniform boundary samples starting at angle 0
/// (circle), at (-L/2,-R) running counter-clockwise (stadium), or at vertex
/// 0 (polygon). Point sets pass through unchanged.
std::vector<Point> sample_compact(const CompactSetDescriptor& desc, std::size_t density);

/// max(64, ceil(40 * diameter / r)) for curves; the point count for point sets.
std::size_t default_density(const CompactSetDescriptor& desc, double r);

/// Boundary length of circle, stadium and polygon; 0 for point sets.
double perimeter(const CompactSetDescriptor& desc);

/// Boundary point at arc length s (taken modulo the perimeter) in the
/// sampling parametrisation. Throws for point sets.
Point boundary_point(const CompactSetDescriptor& desc, double s);

using MdmNetwork = SegmentGraph;

struct CoverageReport {
  double max_defect = 0.0;
  std::optional<Point> worst_point;
  bool covered = false;
};

/// Distance from p to the union of vertices and edges of the network.
double network_distance(const MdmNetwork& net, const Point& p);

CoverageReport coverage_check(const MdmNetwork& net, std::span<const Point> m_samples, double r,
                              const ToleranceConfig& tol);

/// Coverage of a whole boundary curve: a scan at `density` samples, then
/// golden-section refinement of every local maximum of the defect. Point
/// sets are checked point by point.
CoverageReport coverage_check_continuous(const MdmNetwork& net, const CompactSetDescriptor& desc,
                                         double r, std::size_t density,
                                         const ToleranceConfig& tol);

struct HorseshoeResult {
  MdmNetwork network;
  double length = 0.0;           ///< polyline length of `network`
  double analytic_length = 0.0;  ///< same shape with exact arcs
  double phi = 0.0;              ///< half-angle of the gap
  double tangent_length = 0.0;   ///< length of each tangent segment
  CoverageReport coverage;       ///< against 40x default_density boundary samples
};

/// Length of the exact-arc horseshoe with gap half-angle phi and the
/// shortest covering tangent segments; +inf when phi is infeasible.
double horseshoe_length(double R, double r, double seg_len, double phi);

/// Shortest tangent segment covering the gap of half-angle phi (the
/// stadium gap sits on a cap, so the local geometry does not depend on
/// seg_len); nullopt when no length covers.
std::optional<double> horseshoe_tangent_length(double R, double r, double phi);

HorseshoeResult horseshoe_circle(double R, double r, const ToleranceConfig& tol);
HorseshoeResult horseshoe_stadium(double R, double r, double seg_len, const ToleranceConfig& tol);

/// Polyline horseshoe for a given gap, with arc chords of angle at most
/// max_chord_angle. Used to seed the numeric solver.
MdmNetwork horseshoe_network(double R, double r, double seg_len, double phi,
                             double max_chord_angle);

struct NumericConfig {
  std::size_t density = 0;         ///< working samples; 0 selects 4x default_density for curves
  std::size_t check_density = 0;   ///< scan density for the continuous check; 0 selects 40x default
  int max_epochs = 12;
  double mu_factor = 4.0;
  int max_iters_per_epoch = 500;
  bool topology_moves = true;
  ToleranceConfig tol{};
  /// When set, receives the penalised objective after every optimizer step,
  /// with NaN separating epochs.
  std::vector<double>* trace = nullptr;
};

struct NumericResult {
  MdmNetwork network;
  double length = 0.0;
  CoverageReport coverage;
  bool feasible = false;
  int epochs = 0;
  int iterations = 0;
};

/// Penalty method: minimise length + mu * sum max(0, dist(m, net) - r')^2
/// over vertex positions, multiplying mu by mu_factor each epoch. For
/// curves r' = r - h/2 - coverage_eps/2 with h the sample spacing, which
/// makes sample coverage imply coverage of the whole curve; for point sets
/// r' = r - coverage_eps/2. Feasibility is certified by
/// coverage_check_continuous. Returns the shortest iterate (the init included)
/// that passes the dense coverage check, or the last iterate with
/// feasible = false.
NumericResult solve_mdm_numeric(const CompactSetDescriptor& desc, double r, const MdmNetwork& init,
                                const NumericConfig& config = {});

/// Start network for the competitor: two C-shaped parallel arcs joined by a
/// bottom path with a central branch point and a vertical stem ending in a
/// second branch point with two short arms.
MdmNetwork stadium_competitor_init(double R, double r, double seg_len, int arc_segments = 24);

/// solve_mdm_numeric over the fixed competitor topology.
NumericResult stadium_competitor(double R, double r, double seg_len, const ToleranceConfig& tol);

struct FiniteMdmResult {
  MdmNetwork network;
  double length = 0.0;
  Topology topology;      ///< empty edges when the network is a single vertex
  bool converged = true;  ///< every relaxation converged
  std::size_t relaxed = 0;
};

/// MDM of a finite set: the shortest tree touching every closed ball
/// B_r(m_i), by exhaustion over full topologies on the balls. Overlapping
/// balls need no special case since attachments may coincide. A network
/// collapsing to a point is returned as one vertex with length 0.
FiniteMdmResult solve_mdm_finite(std::span<const Point> points, double r,
                                 const ToleranceConfig& tol, int n_max = kDefaultNMax);

struct EnergeticPoint {
  Point x;
  Point witness;
  friend bool operator==(const EnergeticPoint&, const EnergeticPoint&) = default;
};

/// Network points x with a witness y in M such that |xy| is r within
/// rel_band * r below and coverage_eps above and no network point is
/// closer to y. Duplicate x within eps_len * diameter are dropped.
std::vector<EnergeticPoint> energetic_points(const MdmNetwork& net,
                                             std::span<const Point> m_samples, double r,
                                             const ToleranceConfig& tol, double rel_band = 1e-3);

struct MdmReport {
  bool connected = false;
  bool has_cycle = false;
  /// Edges after contracting degenerate edges and merging collinear runs.
  int segment_count = 0;
  std::optional<int> segment_bound;  ///< 2m - 3 when m_count >= 2
  std::optional<double> min_angle;
  std::vector<double> angles;  ///< smallest angle at each vertex of degree >= 2
  bool bound_ok() const { return !segment_bound || segment_count <= *segment_bound; }
};

/// m_count = 0 skips the segment bound.
MdmReport verify_mdm(const MdmNetwork& net, int m_count, const ToleranceConfig& tol);

}  // namespace steinerlab

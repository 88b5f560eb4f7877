#pragma once

#include "steinerlab/mdm.hpp"
#include "steinerlab/steiner_solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace steinerlab {

/// Axis-aligned cube [lo, hi]^d.
struct Box {
  std::size_t d = 2;
  double lo = 0.0;
  double hi = 1.0;
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit Mersenne
/// Twister draw; the sequence is fixed by the seed on every platform.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// N i.i.d. uniform points in the box (unit square by default).
std::vector<Point> random_instance(std::size_t n, std::uint64_t seed, const Box& region = {});

/// N i.i.d. uniform points inside a simple planar polygon, by rejection
/// from its bounding box.
std::vector<Point> random_instance(std::size_t n, std::uint64_t seed, const Polygon& region);

/// Triangular-lattice points clipped to the unit square, with the spacing
/// whose count is closest to n_target (always within 5%).
std::vector<Point> hex_lattice_instance(int n_target);

/// (0,0), (1,sqrt3), (2,0), (3,sqrt3), ... truncated to n points.
std::vector<Point> zigzag_instance(int n);

/// The regular n_gon of circumradius 1 in the plane x = 1 centred at
/// (1,0,0), together with its images under x -> lambda^k x for k = 1..K.
std::vector<Point> homothety_instance(int n_gon, double lambda, int K);

/// MST followed by greedy Fermat-point insertion at every vertex whose two
/// incident edges meet below 2pi/3, with local re-relaxation of the Steiner
/// points involved, until no move shortens the tree. Never longer than the
/// MST. Terminals may keep degree > 1, so the topology is not full.
EmbeddedTree heuristic_steiner(std::span<const Point> points, const ToleranceConfig& tol = {});

struct PowerLawFit {
  double beta = 0.0;
  double exponent = 0.0;
  double r_squared = 0.0;
};

struct SizeSample {
  double n = 0.0;
  double length = 0.0;
};

/// Least-squares line through (log N, log length).
PowerLawFit fit_power_law(std::span<const SizeSample> rows);

enum class SolverKind { exact, heuristic, restricted };

std::string_view solver_name(SolverKind kind);
SolverKind parse_solver(std::string_view name);

/// One block of a suite: a generator, its sizes and parameters.
struct SuiteEntry {
  std::string generator;  ///< random | hex_lattice | zigzag | homothety
  std::vector<int> sizes;  ///< N for random/hex_lattice/zigzag
  std::size_t d = 2;       ///< random only
  int reps = 1;            ///< random only
  std::uint64_t seed = 1;  ///< random only
  SolverKind solver = SolverKind::heuristic;
  int n_gon = 3;           ///< homothety only
  std::vector<double> lambdas{0.3};
  int K = 1;
};

struct SuiteSpec {
  std::vector<SuiteEntry> entries;
  int n_max = kDefaultNMax;
  ToleranceConfig tol;
};

/// Reads {"entries": [{"generator": ..., "sizes": [...], ...}], "n_max": 9}.
/// Throws std::invalid_argument naming the offending field.
SuiteSpec parse_suite_spec(std::string_view json_text);

struct ExperimentRun {
  std::string instance_id;
  std::string generator;  ///< name with parameters, e.g. "random(d=2)"
  std::uint64_t seed = 0;
  int N = 0;
  std::size_t d = 2;
  SolverKind solver = SolverKind::heuristic;
  double length = 0.0;
  double normalized = 0.0;
  std::string normalization;  ///< formula used for `normalized`
  double wall_time_ms = 0.0;
  std::optional<std::string> error;
};

/// Divisor used for `normalized`: N^((d-1)/d) for random and homothety
/// runs, sqrt(N * area) for lattice runs, sqrt3 (N-1) for zigzag runs.
double normalization_divisor(std::string_view generator, int n, std::size_t d);

/// Runs every row of the suite; rows are sorted by instance_id and failed
/// rows carry an error instead of aborting the suite.
std::vector<ExperimentRun> run_suite(const SuiteSpec& spec);

/// Header instance_id,generator,seed,N,d,solver,length,normalized,
/// wall_time_ms,normalization,error. With timing off wall_time_ms is 0 so
/// the output depends only on the suite.
void write_suite_csv(std::ostream& out, std::span<const ExperimentRun> rows, bool timing = true);

struct SizeSummary {
  int N = 0;
  int count = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double mean_normalized = 0.0;
};

/// Mean length and standard error per N over successful rows.
std::vector<SizeSummary> summarize_by_size(std::span<const ExperimentRun> rows);

}  // namespace steinerlab

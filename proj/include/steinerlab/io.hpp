#pragma once

#include "steinerlab/mdm.hpp"
#include "steinerlab/steiner_solver.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace steinerlab {

inline constexpr std::string_view kSchemaVersion = "1";

/// Validation failure while reading a file; `field` is a JSON path such as
/// "terminals[2]" or "r".
class FormatError : public std::invalid_argument {
 public:
  FormatError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class ProblemKind { steiner, mdm };

std::string_view problem_name(ProblemKind kind);

struct InstanceFile {
  std::string schema_version{kSchemaVersion};
  std::size_t dim = 2;
  ProblemKind problem = ProblemKind::steiner;
  std::vector<Point> terminals;             ///< steiner
  std::optional<CompactSetDescriptor> set;  ///< mdm
  std::optional<double> r;                  ///< mdm

  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

/// Parses and validates an instance. Throws FormatError naming the field.
InstanceFile parse_instance(std::string_view json_text);

/// Canonical JSON (sorted keys, shortest round-trip numbers, trailing newline).
std::string serialize_instance(const InstanceFile& inst);

/// 16 hex digits of FNV-1a 64 over the canonical serialisation.
std::string instance_digest(const InstanceFile& inst);

struct ResultCoverage {
  double max_defect = 0.0;
  bool covered = false;

  friend bool operator==(const ResultCoverage&, const ResultCoverage&) = default;
};

struct ResultReport {
  std::vector<int> degrees;        ///< per network vertex
  std::vector<double> angles;      ///< smallest angle at each contracted vertex of degree >= 2
  std::optional<double> min_angle;
  std::optional<int> segment_count;
  std::optional<int> segment_bound;
  std::optional<ResultCoverage> coverage;
  std::vector<EnergeticPoint> energetic;
  std::optional<int> cominimal_count;

  friend bool operator==(const ResultReport&, const ResultReport&) = default;
};

struct SolverMeta {
  std::string solver;
  int iterations = 0;
  bool converged = true;
  ToleranceConfig tol;

  friend bool operator==(const SolverMeta&, const SolverMeta&) = default;
};

struct ResultFile {
  std::string schema_version{kSchemaVersion};
  std::string instance_digest;
  ProblemKind problem = ProblemKind::steiner;
  double length = 0.0;
  /// Vertices 0..n_terminals-1 are the terminals (Steiner results only).
  SegmentGraph network;
  int n_terminals = 0;
  std::optional<Topology> topology;
  std::optional<CompactSetDescriptor> set;  ///< copied from the instance for rendering
  std::optional<double> r;
  ResultReport report;
  SolverMeta meta;

  friend bool operator==(const ResultFile&, const ResultFile&) = default;
};

ResultFile parse_result(std::string_view json_text);
std::string serialize_result(const ResultFile& res);

/// Result for an exact (or heuristic) Steiner tree of `inst`.
ResultFile make_steiner_result(const InstanceFile& inst, const EmbeddedTree& tree,
                               const ToleranceConfig& tol, std::string solver,
                               std::optional<int> cominimal_count = std::nullopt);

/// Result for an MDM network of `inst`; coverage and energetic points are
/// evaluated on `m_samples`.
ResultFile make_mdm_result(const InstanceFile& inst, const MdmNetwork& net,
                           std::span<const Point> m_samples, const ToleranceConfig& tol,
                           std::string solver, int iterations, bool converged);

/// Named tolerance profiles: "default", "strict", "loose".
ToleranceConfig tolerance_profile(std::string_view name);

}  // namespace steinerlab

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qmd/analysis.hpp"
#include "qmd/interp.hpp"
#include "qmd/solver.hpp"

namespace qmd {

using ordered_json = nlohmann::ordered_json;

/// Parse or validation failure, with the offending field in the message.
class ProblemFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Plain-data mirror of the problem file. Numbers are decimal with full
// precision; the schema is closed so validation can be exact.

struct QuadraticPieceSpec {
  std::vector<std::vector<double>> matrix;  // "A"
  std::vector<double> linear;               // "b"
  double offset = 0.0;                      // "alpha"
  friend bool operator==(const QuadraticPieceSpec&, const QuadraticPieceSpec&) = default;
};

struct ObjectiveSpec {
  std::string type;  // "example1" | "maxquad" | "quadratic"
  double k = 1.0;
  double delta = 1.0;
  std::vector<QuadraticPieceSpec> pieces;  // maxquad list; quadratic uses one
  friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;
};

struct ConstraintSpec {
  std::string type;  // "linear" | "norm_ball_residual"
  std::vector<double> a;
  double b = 0.0;
  std::string norm = "l2";  // "l1" | "l2" | "linf"
  std::vector<double> center;
  double radius = 1.0;
  friend bool operator==(const ConstraintSpec&, const ConstraintSpec&) = default;
};

struct SetSpec {
  std::string type;  // "box" | "ball" | "simplex"
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> center;
  double radius = 1.0;
  std::size_t dim = 0;
  friend bool operator==(const SetSpec&, const SetSpec&) = default;
};

struct ProxSpec {
  std::string kind;  // "euclidean_on_box" | "euclidean_on_ball" | "entropy_on_simplex"
  SetSpec set;
  std::optional<std::vector<double>> center;
  friend bool operator==(const ProxSpec&, const ProxSpec&) = default;
};

struct ProblemSpec {
  ObjectiveSpec objective;
  std::vector<ConstraintSpec> constraints;
  std::optional<ProxSpec> prox;  // defaulted for example1
  double epsilon = 0.0;
  double theta0 = 0.0;
  std::optional<std::vector<double>> x_star;
  std::optional<double> declared_lipschitz;
  std::optional<double> declared_jump_total;
  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

ProblemSpec parse_problem_spec(const ordered_json& j);
ordered_json problem_spec_json(const ProblemSpec& spec);
ProblemSpec load_problem_spec(const std::string& path);

/// Problem assembled from a spec, together with the effective declared
/// regularity (file overrides win over the derived values) and the known
/// solution when the file carries one.
struct LoadedProblem {
  Problem problem;
  ProblemSpec spec;
  std::optional<Vector> x_star;
  double declared_lipschitz = 0.0;
  double declared_jump_total = 0.0;
};

LoadedProblem build_problem(const ProblemSpec& spec);
LoadedProblem load_problem(const std::string& path);

// Report serialization consumed by the CLI.

const char* stop_reason_name(StopReason reason);
ordered_json vector_json(const Vector& v);
ordered_json step_record_json(const StepRecord& rec);
ordered_json solver_report_json(const SolverReport& report);
ordered_json certificate_json(const CertificateResult& cert);
ordered_json interpolation_report_json(const InterpolationReport& report);
ordered_json segment_scan_json(const SegmentScan& scan);

/// Step log as CSV with columns iteration, kind, constraint_index (empty on
/// productive steps), step_size, subgradient_dual_norm, objective_value,
/// max_constraint_value. Numbers round-trip exactly.
std::string step_log_csv(const std::vector<StepRecord>& log);

}  // namespace qmd

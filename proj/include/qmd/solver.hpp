#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmd/oracles.hpp"
#include "qmd/prox.hpp"

namespace qmd {

/// Constrained problem: minimize a quasiconvex locally Lipschitz objective
/// over the prox setup's feasible set subject to g_m <= 0 for every
/// constraint oracle. An empty constraint list makes every step productive.
struct Problem {
  ObjectiveOracle objective;
  std::vector<ConstraintOracle> constraints;
  ProxSetup prox;
  double epsilon = 1e-2;
  double theta0 = 1.0;
  /// Safety cap on iterations; <= 0 selects 10x the theoretical bound.
  std::int64_t max_iterations = 0;
};

enum class StepKind { Productive, NonProductive };

struct StepRecord {
  std::int64_t index = 0;
  StepKind kind = StepKind::Productive;
  std::optional<std::size_t> constraint_index;  // set on non-productive steps
  double step_size = 0.0;
  double subgradient_dual_norm = 0.0;
  Vector point;        // iterate the step was taken from
  Vector subgradient;  // element fed to the mirror step
  double objective_value = 0.0;
  double max_constraint_value = 0.0;
};

struct SolverState {
  Vector x;
  std::int64_t iteration = 0;
  std::vector<std::int64_t> productive_set;
  /// Running sum of 1 / ||grad g_{m(k)}(x^k)||_*^2 over non-productive steps.
  double nonproductive_weight = 0.0;
  std::vector<StepRecord> step_log;
};

enum class StopReason { CriterionMet, ZeroObjectiveSubgradient, SafetyCap };

struct SolverReport {
  std::optional<Vector> best_productive_point;
  double best_productive_value = 0.0;  // meaningful iff a productive point exists
  std::int64_t iterations_used = 0;
  StopReason stop_reason = StopReason::SafetyCap;
  SolverState state;
};

/// Adaptive mirror descent with productive and non-productive steps.
///
/// Each iteration checks the constraints at the current iterate. If the
/// largest value is at most epsilon the step is productive: the iterate is
/// recorded in the productive set and moved by a mirror step along an
/// objective subgradient with h = epsilon / ||g||_*. Otherwise the step
/// follows the first violated constraint with h = epsilon / ||g||_*^2. The
/// loop stops once
///   theta0^2 <= epsilon^2/2 * (|I| + sum_{k not in I} 1/||grad g(x^k)||_*^2),
/// evaluated after every iteration, and reports the best productive iterate.
///
/// A zero objective subgradient on a productive step stops immediately with
/// ZeroObjectiveSubgradient (the no-inflection assumption makes that iterate
/// optimal); a zero constraint subgradient on a violated constraint is an
/// oracle inconsistency and throws. Subgradients at kinks are resolved by the
/// minimal-dual-norm rule, which maximizes the productive step size.
SolverReport solve(const Problem& problem);

/// theta0^2 <= epsilon^2/2 * (|I| + nonproductive_weight).
bool stopping_criterion(const SolverState& state, double epsilon, double theta0);

/// ceil(2 max{1, M_g^2} theta0^2 / epsilon^2): iterations after which the
/// stopping criterion must have fired when the inputs are honest.
std::int64_t theoretical_iteration_bound(double epsilon, double theta0,
                                         double constraint_lipschitz);

}  // namespace qmd

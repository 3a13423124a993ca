#include "qmd/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qmd {

bool stopping_criterion(const SolverState& state, double epsilon, double theta0) {
  double counter = static_cast<double>(state.productive_set.size()) + state.nonproductive_weight;
  return theta0 * theta0 <= 0.5 * epsilon * epsilon * counter;
}

std::int64_t theoretical_iteration_bound(double epsilon, double theta0,
                                         double constraint_lipschitz) {
  if (!(epsilon > 0.0) || !(theta0 > 0.0)) {
    throw std::invalid_argument("epsilon and theta0 must be > 0");
  }
  double m2 = std::max(1.0, constraint_lipschitz * constraint_lipschitz);
  return static_cast<std::int64_t>(std::ceil(2.0 * m2 * theta0 * theta0 / (epsilon * epsilon)));
}

namespace {

double max_lipschitz(const std::vector<ConstraintOracle>& constraints) {
  double m = 0.0;
  for (const auto& c : constraints) m = std::max(m, c.lipschitz);
  return m;
}

}  // namespace

SolverReport solve(const Problem& problem) {
  if (!(problem.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(problem.theta0 > 0.0)) throw std::invalid_argument("theta0 must be > 0");

  const double eps = problem.epsilon;
  const NormKind nk = problem.prox.norm();
  const std::int64_t cap =
      problem.max_iterations > 0
          ? problem.max_iterations
          : 10 * theoretical_iteration_bound(eps, problem.theta0,
                                             max_lipschitz(problem.constraints));

  SolverState state;
  state.x = problem.prox.start_point();

  std::optional<Vector> best_point;
  double best_value = std::numeric_limits<double>::infinity();
  auto track_best = [&](const Vector& x, double fx) {
    if (fx < best_value) {
      best_value = fx;
      best_point = x;
    }
  };

  StopReason reason = StopReason::SafetyCap;
  while (state.iteration < cap) {
    const Vector x = state.x;
    double gmax = 0.0;
    std::size_t violated_index = 0;
    bool violated = false;
    if (!problem.constraints.empty()) {
      MaxConstraintResult mc = max_constraint(x, problem.constraints, eps);
      gmax = mc.value;
      violated = mc.value > eps;
      violated_index = mc.index;
    }

    if (!violated) {
      const double fx = problem.objective.value(x);
      Vector g = select_subgradient(problem.objective.subgradient_set(x), MinDualNorm{nk});
      const double gn = dual_norm(g, nk);
      if (gn == 0.0) {
        // Optimal under the no-inflection assumption: log the visit, stop.
        state.step_log.push_back({state.iteration, StepKind::Productive, std::nullopt, 0.0, 0.0,
                                  x, g, fx, gmax});
        state.productive_set.push_back(state.iteration);
        track_best(x, fx);
        reason = StopReason::ZeroObjectiveSubgradient;
        break;
      }
      const double h = eps / gn;
      state.step_log.push_back(
          {state.iteration, StepKind::Productive, std::nullopt, h, gn, x, g, fx, gmax});
      state.productive_set.push_back(state.iteration);
      track_best(x, fx);
      state.x = problem.prox.mirror_step(x, g, h);
    } else {
      const ConstraintOracle& c = problem.constraints[violated_index];
      Vector g = c.subgradient(x);
      const double gn = dual_norm(g, nk);
      if (gn == 0.0) {
        // Convexity makes g(x) > epsilon >= g anywhere impossible with a zero
        // subgradient.
        throw std::runtime_error("constraint oracle inconsistency: violated constraint " +
                                 std::to_string(violated_index) + " has a zero subgradient");
      }
      const double h = eps / (gn * gn);
      state.step_log.push_back({state.iteration, StepKind::NonProductive, violated_index, h, gn,
                                x, g, problem.objective.value(x), gmax});
      state.nonproductive_weight += 1.0 / (gn * gn);
      state.x = problem.prox.mirror_step(x, g, h);
    }

    ++state.iteration;
    if (stopping_criterion(state, eps, problem.theta0)) {
      reason = StopReason::CriterionMet;
      break;
    }
  }

  SolverReport report;
  report.best_productive_point = std::move(best_point);
  report.best_productive_value = best_value;
  report.iterations_used = state.iteration;
  report.stop_reason = reason;
  report.state = std::move(state);
  return report;
}

}  // namespace qmd

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmd/geometry.hpp"
#include "qmd/oracles.hpp"
#include "qmd/prox.hpp"
#include "qmd/solver.hpp"

namespace qmd {

/// normalized_gap(x, y) = <g / ||g||_*, x - y> with g the minimal-dual-norm subgradient
/// at x (the same selection the solver uses, so certificates audit exactly
/// what it did). Throws std::domain_error when the subgradient is zero.
double normalized_gap(const ObjectiveOracle& f, const Vector& x, const Vector& y,
           NormKind norm = NormKind::Euclidean);

/// Same quantity evaluated with an externally chosen subgradient (e.g. the
/// one recorded in a solver step log).
double normalized_gap_given(const Vector& subgradient, const Vector& x, const Vector& y,
                 NormKind norm = NormKind::Euclidean);

/// Brute-force envelope omega(tau) = max { f(x) - f(x_star) : x in Q,
/// ||x - x_star|| <= tau } over a fixed grid of Q. The grid is built once;
/// queries are monotone in tau by construction. Dimension <= 3.
class OmegaEnvelope {
 public:
  OmegaEnvelope(const ObjectiveOracle& f, const Vector& x_star, const FeasibleSet& Q,
                int grid_per_dim = 0, NormKind norm = NormKind::Euclidean);

  double value(double tau) const;
  double grid_spacing() const { return spacing_; }
  /// Largest subgradient dual norm seen on a subsample of the grid; used to
  /// convert grid spacing into a value slack.
  double lipschitz_estimate() const { return lipschitz_; }

 private:
  std::vector<double> distances_;   // ascending
  std::vector<double> prefix_max_;  // running max of f - f(x_star)
  double spacing_ = 0.0;
  double lipschitz_ = 0.0;
};

/// One-off envelope query; see OmegaEnvelope. grid_per_dim 0 selects the
/// default resolution for the dimension (10000 / 300 / 60).
double omega(const ObjectiveOracle& f, const Vector& x_star, double tau, const FeasibleSet& Q,
             int grid_per_dim = 0, NormKind norm = NormKind::Euclidean);

/// f(x) - f(x_star) <= omega(normalized_gap(x, x_star)) up to the envelope's grid slack.
bool envelope_bound_check(const ObjectiveOracle& f, const Vector& x, const Vector& x_star,
                    const FeasibleSet& Q, NormKind norm = NormKind::Euclidean,
                    int grid_per_dim = 0);

/// Same check against a prebuilt envelope (reuse it when testing many x).
bool envelope_bound_check(const ObjectiveOracle& f, const Vector& x, const Vector& x_star,
                    const OmegaEnvelope& envelope, NormKind norm = NormKind::Euclidean);

/// Post-hoc solution-quality certificate. Clauses needing x_star are left
/// unevaluated when it is unknown; the convergence-measure clause also
/// requires the run to have stopped by its criterion. Comparisons carry 1e-9
/// slack.
struct CertificateResult {
  std::optional<double> min_normalized_gap;
  std::optional<bool> normalized_gap_bound_holds;  // min_normalized_gap < epsilon
  std::optional<double> objective_gap;
  std::optional<double> gap_bound;  // epsilon (||grad f(x_star)||_* + delta) + L epsilon^2 / 2
  std::optional<bool> gap_bound_holds;
  bool constraint_residuals_ok = false;  // g_m(x^k) <= epsilon on productive k
  double worst_productive_constraint = 0.0;
  std::optional<double> worst_nonproductive_constraint;
  bool productive_set_empty = false;
  std::string note;

  /// True when every evaluated clause holds and a productive point exists.
  bool passed() const;
};

CertificateResult certify(const SolverReport& report, const Problem& problem,
                          const std::optional<Vector>& x_star, double lipschitz_grad,
                          double jump_total);

/// Left minus right side of the per-step inequality
///   h <p, x - u> <= h^2/2 ||p||_*^2 + V(x, u) - V(z, u),  z = mirror_step(x, p, h).
/// Nonpositive up to rounding for every feasible input.
double step_inequality_residual(const ProxSetup& prox, const Vector& x, const Vector& p, double h,
                       const Vector& u);

/// Worst step_inequality_residual over a recorded trace (zero-step records skipped),
/// with u as the comparison point.
double max_trace_step_residual(const SolverReport& report, const ProxSetup& prox,
                                 const Vector& u);

/// Independent brute-force solution oracle: nested grid search over Q
/// filtered by the constraints, refined to the target spacing. Never calls
/// the solver. Dimension <= 3.
Vector grid_solution(const Problem& problem, double target_spacing = 1e-4);

}  // namespace qmd

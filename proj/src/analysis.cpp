#include "qmd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace qmd {

double normalized_gap_given(const Vector& subgradient, const Vector& x, const Vector& y, NormKind norm_kind) {
  double gn = dual_norm(subgradient, norm_kind);
  if (gn == 0.0) {
    throw std::domain_error("normalized_gap is undefined for a zero subgradient");
  }
  return dot(subgradient, x - y) / gn;
}

double normalized_gap(const ObjectiveOracle& f, const Vector& x, const Vector& y, NormKind norm_kind) {
  Vector g = select_subgradient(f.subgradient_set(x), MinDualNorm{norm_kind});
  return normalized_gap_given(g, x, y, norm_kind);
}

namespace {

// Free-coordinate parameterization of a feasible set for grid scans. The
// lift embeds a free point into R^n and rejects infeasible candidates.
struct GridParam {
  std::vector<double> lo;
  std::vector<double> hi;
  std::function<std::optional<Vector>(const std::vector<double>&)> lift;
};

GridParam make_grid_param(const FeasibleSet& Q) {
  GridParam p;
  if (const auto* box = std::get_if<Box>(&Q.shape())) {
    p.lo = box->lower.coords();
    p.hi = box->upper.coords();
    p.lift = [](const std::vector<double>& u) { return Vector(u); };
    return p;
  }
  if (const auto* ball = std::get_if<EuclideanBall>(&Q.shape())) {
    Box bb = Q.bounding_box();
    p.lo = bb.lower.coords();
    p.hi = bb.upper.coords();
    EuclideanBall b = *ball;
    // project instead of rejecting, so boundary minimizers are tracked at
    // full grid resolution
    p.lift = [b](const std::vector<double>& u) -> std::optional<Vector> {
      Vector x(u);
      Vector d = x - b.center;
      double n = norm(d, NormKind::Euclidean);
      if (n <= b.radius) return x;
      return b.center + (b.radius / n) * d;
    };
    return p;
  }
  const std::size_t n = std::get<Simplex>(Q.shape()).dim;
  p.lo.assign(n > 1 ? n - 1 : 0, 0.0);
  p.hi.assign(n > 1 ? n - 1 : 0, 1.0);
  p.lift = [n](const std::vector<double>& u) -> std::optional<Vector> {
    std::vector<double> x(n);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      x[i] = u[i];
      sum += u[i];
    }
    if (sum > 1.0) {
      // scale onto the far face rather than rejecting the wedge
      double scale = sum;
      sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        x[i] /= scale;
        sum += x[i];
      }
    }
    x[n - 1] = std::max(1.0 - sum, 0.0);
    return Vector(std::move(x));
  };
  return p;
}

int default_grid(std::size_t dim) {
  switch (dim) {
    case 1:
      return 10001;
    case 2:
      return 301;
    case 3:
      return 61;
    default:
      throw std::invalid_argument("grid scans support dimension <= 3");
  }
}

// Visit every lifted grid point of the parameter box.
void for_each_grid_point(const GridParam& p, int per_dim,
                         const std::function<void(const Vector&)>& visit) {
  const std::size_t free_dims = p.lo.size();
  if (free_dims == 0) {
    if (auto x = p.lift({})) visit(*x);
    return;
  }
  std::vector<double> u(free_dims, 0.0);
  std::vector<int> idx(free_dims, 0);
  while (true) {
    for (std::size_t d = 0; d < free_dims; ++d) {
      double t = per_dim > 1 ? static_cast<double>(idx[d]) / (per_dim - 1) : 0.0;
      u[d] = p.lo[d] + t * (p.hi[d] - p.lo[d]);
    }
    if (auto x = p.lift(u)) visit(*x);
    std::size_t d = 0;
    while (d < free_dims && ++idx[d] == per_dim) {
      idx[d] = 0;
      ++d;
    }
    if (d == free_dims) break;
  }
}

}  // namespace

OmegaEnvelope::OmegaEnvelope(const ObjectiveOracle& f, const Vector& x_star,
                             const FeasibleSet& Q, int grid_per_dim, NormKind norm_kind) {
  if (x_star.dim() != Q.dim()) throw std::invalid_argument("dimension mismatch");
  const int per_dim = grid_per_dim > 1 ? grid_per_dim : default_grid(Q.dim());
  GridParam param = make_grid_param(Q);

  // Cell diagonal of the parameter grid, in the evaluation norm; for the
  // simplex the dependent coordinate can move by the sum of the free steps.
  std::vector<double> steps(param.lo.size());
  for (std::size_t d = 0; d < steps.size(); ++d) {
    steps[d] = (param.hi[d] - param.lo[d]) / std::max(1, per_dim - 1);
  }
  if (steps.empty()) {
    spacing_ = 0.0;
  } else if (std::holds_alternative<Simplex>(Q.shape())) {
    std::vector<double> diag = steps;
    double sum = 0.0;
    for (double s : steps) sum += s;
    diag.push_back(sum);
    spacing_ = norm(Vector(diag), norm_kind);
  } else {
    spacing_ = norm(Vector(steps), norm_kind);
  }

  const double f_star = f.value(x_star);
  std::vector<std::pair<double, double>> samples;  // (distance, f - f_star)
  samples.emplace_back(0.0, 0.0);
  std::size_t lipschitz_stride = 0;
  for_each_grid_point(param, per_dim, [&](const Vector& x) {
    samples.emplace_back(norm(x - x_star, norm_kind), f.value(x) - f_star);
    if (lipschitz_stride == 0) {
      SubgradientSet set = f.subgradient_set(x);
      for (const Vector& g : set.extreme_points()) {
        lipschitz_ = std::max(lipschitz_, dual_norm(g, norm_kind));
      }
    }
    lipschitz_stride = (lipschitz_stride + 1) % 17;
  });

  std::sort(samples.begin(), samples.end());
  distances_.reserve(samples.size());
  prefix_max_.reserve(samples.size());
  double running = -std::numeric_limits<double>::infinity();
  for (const auto& [d, v] : samples) {
    running = std::max(running, v);
    distances_.push_back(d);
    prefix_max_.push_back(running);
  }
}

double OmegaEnvelope::value(double tau) const {
  if (tau < 0.0) throw std::invalid_argument("omega requires tau >= 0");
  auto it = std::upper_bound(distances_.begin(), distances_.end(), tau);
  if (it == distances_.begin()) return 0.0;
  return prefix_max_[static_cast<std::size_t>(it - distances_.begin()) - 1];
}

double omega(const ObjectiveOracle& f, const Vector& x_star, double tau, const FeasibleSet& Q,
             int grid_per_dim, NormKind norm_kind) {
  return OmegaEnvelope(f, x_star, Q, grid_per_dim, norm_kind).value(tau);
}

bool envelope_bound_check(const ObjectiveOracle& f, const Vector& x, const Vector& x_star,
                    const OmegaEnvelope& envelope, NormKind norm_kind) {
  double v = normalized_gap(f, x, x_star, norm_kind);
  // One spacing covers the value error at the grid maximizer, another covers
  // maximizers whose nearest in-ball grid point falls just outside the filter.
  double slack = 2.0 * envelope.lipschitz_estimate() * envelope.grid_spacing();
  double lhs = f.value(x) - f.value(x_star);
  double rhs = envelope.value(std::max(v, 0.0));
  return lhs <= rhs + slack + 1e-12 * (1.0 + std::abs(lhs));
}

bool envelope_bound_check(const ObjectiveOracle& f, const Vector& x, const Vector& x_star,
                    const FeasibleSet& Q, NormKind norm_kind, int grid_per_dim) {
  return envelope_bound_check(f, x, x_star, OmegaEnvelope(f, x_star, Q, grid_per_dim, norm_kind),
                        norm_kind);
}

bool CertificateResult::passed() const {
  if (productive_set_empty) return false;
  if (!constraint_residuals_ok) return false;
  if (normalized_gap_bound_holds && !*normalized_gap_bound_holds) return false;
  if (gap_bound_holds && !*gap_bound_holds) return false;
  return true;
}

CertificateResult certify(const SolverReport& report, const Problem& problem,
                          const std::optional<Vector>& x_star, double lipschitz_grad,
                          double jump_total) {
  constexpr double kSlack = 1e-9;
  const double eps = problem.epsilon;
  const NormKind nk = problem.prox.norm();

  CertificateResult cert;
  std::vector<const StepRecord*> productive;
  for (const StepRecord& rec : report.state.step_log) {
    if (rec.kind == StepKind::Productive) {
      productive.push_back(&rec);
    } else {
      double worst = cert.worst_nonproductive_constraint.value_or(
          -std::numeric_limits<double>::infinity());
      cert.worst_nonproductive_constraint = std::max(worst, rec.max_constraint_value);
    }
  }
  if (productive.empty()) {
    cert.productive_set_empty = true;
    cert.constraint_residuals_ok = true;
    cert.note = "no productive iterate was recorded; certificate is vacuous";
    return cert;
  }

  cert.worst_productive_constraint = -std::numeric_limits<double>::infinity();
  for (const StepRecord* rec : productive) {
    cert.worst_productive_constraint =
        std::max(cert.worst_productive_constraint, rec->max_constraint_value);
  }
  cert.constraint_residuals_ok = cert.worst_productive_constraint <= eps + kSlack;

  if (x_star) {
    double gap = std::numeric_limits<double>::infinity();
    for (const StepRecord* rec : productive) gap = std::min(gap, rec->objective_value);
    gap -= problem.objective.value(*x_star);
    cert.objective_gap = gap;

    Vector g_star = select_subgradient(problem.objective.subgradient_set(*x_star), MinDualNorm{nk});
    cert.gap_bound =
        eps * (dual_norm(g_star, nk) + jump_total) + 0.5 * lipschitz_grad * eps * eps;
    cert.gap_bound_holds = gap <= *cert.gap_bound + kSlack;

    if (report.stop_reason == StopReason::CriterionMet) {
      double min_normalized_gap = std::numeric_limits<double>::infinity();
      for (const StepRecord* rec : productive) {
        if (rec->subgradient_dual_norm == 0.0) continue;
        min_normalized_gap = std::min(min_normalized_gap, normalized_gap_given(rec->subgradient, rec->point, *x_star, nk));
      }
      cert.min_normalized_gap = min_normalized_gap;
      cert.normalized_gap_bound_holds = min_normalized_gap < eps + kSlack;
    } else {
      cert.note = "stopping criterion did not fire; convergence-measure clause not applicable";
    }
  } else {
    cert.note = "solution unknown; only constraint residuals were evaluated";
  }
  return cert;
}

double step_inequality_residual(const ProxSetup& prox, const Vector& x, const Vector& p, double h,
                       const Vector& u) {
  Vector z = prox.mirror_step(x, p, h);
  double pn = dual_norm(p, prox.norm());
  double lhs = h * dot(p, x - u);
  double rhs = 0.5 * h * h * pn * pn + prox.bregman(x, u) - prox.bregman(z, u);
  return lhs - rhs;
}

double max_trace_step_residual(const SolverReport& report, const ProxSetup& prox,
                                 const Vector& u) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const StepRecord& rec : report.state.step_log) {
    if (!(rec.step_size > 0.0)) continue;
    worst = std::max(worst, step_inequality_residual(prox, rec.point, rec.subgradient, rec.step_size, u));
  }
  return worst;
}

Vector grid_solution(const Problem& problem, double target_spacing) {
  const FeasibleSet& Q = problem.prox.set();
  if (Q.dim() > 3) throw std::invalid_argument("grid_solution supports dimension <= 3");
  GridParam param = make_grid_param(Q);
  const std::size_t free_dims = param.lo.size();

  auto feasible_value = [&](const Vector& x) -> std::optional<double> {
    for (const ConstraintOracle& c : problem.constraints) {
      if (c.value(x) > 0.0) return std::nullopt;
    }
    return problem.objective.value(x);
  };

  if (free_dims == 0) {
    return *param.lift({});
  }

  const int per_dim = 41;
  std::vector<double> lo = param.lo, hi = param.hi;
  std::optional<Vector> best;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> best_u;

  for (int level = 0; level < 64; ++level) {
    std::vector<double> u(free_dims, 0.0);
    std::vector<int> idx(free_dims, 0);
    while (true) {
      for (std::size_t d = 0; d < free_dims; ++d) {
        u[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (per_dim - 1);
      }
      if (auto x = param.lift(u)) {
        if (auto v = feasible_value(*x); v && *v < best_value) {
          best_value = *v;
          best = *x;
          best_u = u;
        }
      }
      std::size_t d = 0;
      while (d < free_dims && ++idx[d] == per_dim) {
        idx[d] = 0;
        ++d;
      }
      if (d == free_dims) break;
    }
    double max_step = 0.0;
    for (std::size_t d = 0; d < free_dims; ++d) {
      max_step = std::max(max_step, (hi[d] - lo[d]) / (per_dim - 1));
    }
    if (max_step <= target_spacing || !best) break;
    for (std::size_t d = 0; d < free_dims; ++d) {
      double step = (hi[d] - lo[d]) / (per_dim - 1);
      double c = best_u[d];
      lo[d] = std::max(param.lo[d], c - 3.0 * step);
      hi[d] = std::min(param.hi[d], c + 3.0 * step);
    }
  }
  if (!best) {
    throw std::runtime_error("grid_solution found no feasible point");
  }
  return *best;
}

}  // namespace qmd

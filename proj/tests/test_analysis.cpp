#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qmd/analysis.hpp"
#include "qmd/funclib.hpp"

#include "benchmarks.hpp"
#include "helpers.hpp"

using namespace qmd;

namespace {

ObjectiveOracle constant_gradient(Vector g) {
  return ObjectiveOracle{
      [g](const Vector& x) { return dot(g, x); },
      [g](const Vector&) { return SubgradientSet::singleton(g); },
      [](const Vector&) { return false; },
      {0.0, 0.0},
  };
}

ObjectiveOracle quadratic_1d() {
  MaxQuadObjective mq({QuadraticPiece{SymmetricMatrix::identity(1), Vector{0.0}, 0.0}});
  return make_objective(mq);
}

}  // namespace

TEST_CASE("normalized_gap values") {
  ObjectiveOracle f = constant_gradient(Vector{2.0, 0.0});
  Vector y{0.0, 0.0};
  CHECK(normalized_gap(f, Vector{3.0, 4.0}, y) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(normalized_gap(f, y, y) == 0.0);

  ObjectiveOracle e1 = make_objective(KinkLadderFunction(1.0, 1.0));
  CHECK(normalized_gap(e1, Vector{0.25}, Vector{0.0}) == doctest::Approx(0.25).epsilon(1e-15));

  ObjectiveOracle zero = constant_gradient(Vector{1.0});
  // swap in a zero subgradient
  zero.subgradient_set = [](const Vector&) { return SubgradientSet::singleton(Vector{0.0}); };
  CHECK_THROWS_AS(normalized_gap(zero, Vector{1.0}, Vector{0.0}), std::domain_error);
}

TEST_CASE("normalized_gap is scale invariant and bounded by the distance") {
  qmdtest::Rng rng(67);
  for (int i = 0; i < 200; ++i) {
    Vector g = qmdtest::random_vector(rng, 3, -2.0, 2.0);
    if (dual_norm(g, NormKind::Euclidean) < 1e-9) continue;
    Vector x = qmdtest::random_vector(rng, 3, -2.0, 2.0);
    Vector y = qmdtest::random_vector(rng, 3, -2.0, 2.0);
    double v = normalized_gap_given(g, x, y, NormKind::Euclidean);
    CHECK(normalized_gap_given(4.0 * g, x, y, NormKind::Euclidean) == v);  // powers of two are exact
    CHECK(normalized_gap_given(3.0 * g, x, y, NormKind::Euclidean) == doctest::Approx(v).epsilon(1e-14));
    CHECK(std::abs(v) <= norm(x - y, NormKind::Euclidean) + 1e-12);
  }
}

TEST_CASE("hyperplane distance identity in the Euclidean case") {
  // normalized_gap(x, x_*) equals the distance from x_* to the hyperplane through x
  // orthogonal to the gradient
  qmdtest::Rng rng(71);
  for (int i = 0; i < 100; ++i) {
    Vector g = qmdtest::random_vector(rng, 2, 0.2, 2.0);
    ObjectiveOracle f = constant_gradient(g);
    Vector x = qmdtest::random_vector(rng, 2, -2.0, 2.0);
    Vector x_star = qmdtest::random_vector(rng, 2, -2.0, 2.0);
    double v = normalized_gap(f, x, x_star);
    double plane_distance =
        std::abs(dot(g, x - x_star)) / norm(g, NormKind::Euclidean);
    CHECK(std::abs(v) == doctest::Approx(plane_distance).epsilon(1e-12));
  }
}

TEST_CASE("omega envelope values") {
  // 0.5 ||x||^2 on a radius-2 ball: omega(1) = 0.5
  MaxQuadObjective mq({QuadraticPiece{SymmetricMatrix::identity(2), Vector{0.0, 0.0}, 0.0}});
  ObjectiveOracle f = make_objective(mq);
  FeasibleSet ball = FeasibleSet::ball(Vector{0.0, 0.0}, 2.0);
  OmegaEnvelope env(f, Vector{0.0, 0.0}, ball);
  double slack = 2.0 * env.lipschitz_estimate() * env.grid_spacing();
  CHECK(env.value(1.0) <= 0.5 + 1e-12);
  CHECK(env.value(1.0) >= 0.5 - slack);
  CHECK(env.value(0.0) == 0.0);
  CHECK_THROWS_AS(env.value(-0.1), std::invalid_argument);

  ObjectiveOracle e1 = make_objective(KinkLadderFunction(1.0, 1.0));
  FeasibleSet unit = FeasibleSet::box(Vector{0.0}, Vector{1.0});
  CHECK(omega(e1, Vector{0.0}, 0.5, unit) == doctest::Approx(0.5).epsilon(1e-6));

  CHECK_THROWS_AS(OmegaEnvelope(f, Vector{0.0, 0.0},
                                FeasibleSet::box(Vector{0.0, 0.0, 0.0, 0.0},
                                                 Vector(std::vector<double>(4, 1.0)))),
                  std::invalid_argument);
}

TEST_CASE("omega is monotone in tau") {
  ObjectiveOracle e1 = make_objective(KinkLadderFunction(1.0, 1.0));
  FeasibleSet unit = FeasibleSet::box(Vector{0.0}, Vector{1.0});
  OmegaEnvelope env(e1, Vector{0.0}, unit);
  double prev = 0.0;
  for (int i = 0; i <= 50; ++i) {
    double tau = 1.2 * i / 50.0;
    double val = env.value(tau);
    CHECK(val >= prev);
    prev = val;
  }
}

TEST_CASE("envelope bound on analytic cases") {
  ObjectiveOracle q = quadratic_1d();
  FeasibleSet box = FeasibleSet::box(Vector{-2.0}, Vector{2.0});
  // normalized_gap(1, 0) = 1, omega(1) = 0.5, gap = 0.5: holds with equality
  CHECK(envelope_bound_check(q, Vector{1.0}, Vector{0.0}, box));
  CHECK(envelope_bound_check(q, Vector{1e-9}, Vector{0.0}, box));

  ObjectiveOracle e1 = make_objective(KinkLadderFunction(1.0, 1.0));
  FeasibleSet unit = FeasibleSet::box(Vector{0.0}, Vector{1.0});
  OmegaEnvelope env(e1, Vector{0.0}, unit);
  qmdtest::Rng rng(73);
  for (int i = 0; i < 100; ++i) {
    Vector x{qmdtest::uniform(rng, 1e-6, 1.0)};
    CHECK(envelope_bound_check(e1, x, Vector{0.0}, env));
  }
}

TEST_CASE("envelope bound in three dimensions") {
  MaxQuadObjective mq({QuadraticPiece{SymmetricMatrix::diagonal({2.0, 1.0, 0.5}),
                                      Vector{0.2, -0.1, 0.3}, 0.0}});
  ObjectiveOracle f = make_objective(mq);
  FeasibleSet box = FeasibleSet::box(Vector{-2.0, -2.0, -2.0}, Vector{2.0, 2.0, 2.0});
  Problem probe{f, {}, ProxSetup::euclidean_on_box(box), 0.1, 1.0, 0};
  Vector x_star = grid_solution(probe);
  OmegaEnvelope env(f, x_star, box);
  qmdtest::Rng rng(89);
  for (int i = 0; i < 50; ++i) {
    Vector x = qmdtest::random_feasible(rng, box);
    Vector g = select_subgradient(f.subgradient_set(x), MinDualNorm{});
    if (dual_norm(g, NormKind::Euclidean) < 1e-12) continue;
    CHECK(envelope_bound_check(f, x, x_star, env));
  }
}

TEST_CASE("certificate on the 1-D benchmark") {
  double eps = 0.05;
  qmdtest::Benchmark bench = qmdtest::one_d_benchmark(eps);
  SolverReport report = solve(bench.problem);
  REQUIRE(report.stop_reason == StopReason::CriterionMet);
  CHECK(theta_bound_holds(bench.problem.prox, bench.x_star, bench.problem.theta0));

  CertificateResult cert = certify(report, bench.problem, bench.x_star,
                                   bench.declared_lipschitz, bench.declared_jump_total);
  REQUIRE(cert.min_normalized_gap.has_value());
  CHECK(*cert.min_normalized_gap < eps);
  CHECK(*cert.normalized_gap_bound_holds);
  REQUIRE(cert.objective_gap.has_value());
  // gradient at the solution is zero, so the bound is L eps^2 / 2
  CHECK(*cert.gap_bound == doctest::Approx(0.5 * 2.0 * eps * eps).epsilon(1e-9));
  CHECK(*cert.objective_gap <= 0.00125);  // the tighter hand-computed value
  CHECK(*cert.gap_bound_holds);
  CHECK(cert.constraint_residuals_ok);
  CHECK(cert.passed());
}

TEST_CASE("certificate clauses degrade gracefully") {
  qmdtest::Benchmark bench = qmdtest::one_d_benchmark(0.05);
  bench.problem.theta0 = 1e6;
  bench.problem.max_iterations = 4;
  SolverReport capped = solve(bench.problem);
  REQUIRE(capped.stop_reason == StopReason::SafetyCap);
  CertificateResult cert = certify(capped, bench.problem, bench.x_star,
                                   bench.declared_lipschitz, bench.declared_jump_total);
  CHECK_FALSE(cert.min_normalized_gap.has_value());  // criterion did not fire
  CHECK_FALSE(cert.normalized_gap_bound_holds.has_value());
  CHECK(cert.constraint_residuals_ok);  // still evaluated

  // no productive step at all: the certificate is vacuous and fails
  MaxQuadObjective mq({QuadraticPiece{SymmetricMatrix::identity(1), Vector{0.0}, 0.0}});
  std::vector<ConstraintOracle> gs{{[](const Vector& x) { return x[0] + 10.0; },
                                    [](const Vector&) { return Vector{1.0}; }, 1.0}};
  FeasibleSet box = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  Problem never{make_objective(mq), gs, ProxSetup::euclidean_on_box(box), 1.0, 1.0, 0};
  SolverReport report = solve(never);
  CertificateResult vacuous = certify(report, never, Vector{0.0}, 2.0, 0.0);
  CHECK(vacuous.productive_set_empty);
  CHECK_FALSE(vacuous.passed());
  CHECK_FALSE(vacuous.note.empty());
}

TEST_CASE("step inequality residual cases") {
  ProxSetup box = ProxSetup::euclidean_on_box(
      FeasibleSet::box(Vector{-5.0, -5.0}, Vector{5.0, 5.0}));
  Vector x{0.5, -0.5}, u{1.0, 1.0};
  CHECK(step_inequality_residual(box, x, Vector{0.0, 0.0}, 0.5, u) == doctest::Approx(0.0));

  // u = x: residual is V(z, x) - h^2/2 ||p||^2 <= 0, with equality when the
  // step stays inside the box
  Vector p{1.0, 2.0};
  CHECK(step_inequality_residual(box, x, p, 0.3, x) <= 1e-12);

  qmdtest::Rng rng(79);
  double worst = -1e300;
  for (int i = 0; i < 1000; ++i) {
    Vector xr = qmdtest::random_feasible(rng, box.set());
    Vector ur = qmdtest::random_feasible(rng, box.set());
    Vector pr = qmdtest::random_vector(rng, 2, -3.0, 3.0);
    double h = qmdtest::uniform(rng, 0.01, 2.0);
    worst = std::max(worst, step_inequality_residual(box, xr, pr, h, ur));
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("grid solution oracle finds constrained minimizers") {
  qmdtest::Benchmark bench = qmdtest::one_d_benchmark(0.05);
  CHECK(norm(bench.x_star - Vector{0.0}, NormKind::LInf) <= 2e-4);

  qmdtest::Benchmark bench2 = qmdtest::two_d_benchmark(0.05);
  // the solution saturates the l1 constraint (unconstrained minimizers are
  // outside the unit ball)
  CHECK(norm(bench2.x_star, NormKind::L1) == doctest::Approx(1.0).epsilon(2e-3));
  for (const auto& c : bench2.problem.constraints) {
    CHECK(c.value(bench2.x_star) <= 1e-9);
  }
}

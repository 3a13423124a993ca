#pragma once

// Benchmark problems shared by the unit and acceptance suites. Solutions are
// always re-derived by the independent grid oracle, never taken from the
// solver.

#include <cmath>
#include <vector>

#include "qmd/analysis.hpp"
#include "qmd/funclib.hpp"
#include "qmd/solver.hpp"

namespace qmdtest {

struct Benchmark {
  qmd::Problem problem;
  qmd::Vector x_star;  // grid-search solution, spacing 1e-4
  double declared_lipschitz = 0.0;
  double declared_jump_total = 0.0;
};

// f(x) = x^2 on [-1, 1] with g(x) = -x (so x >= -epsilon at productive
// iterates), Euclidean prox centered at the start point -1. The solution is
// x_* = 0 and theta0 = sqrt(d(0)) is exact.
inline Benchmark one_d_benchmark(double epsilon) {
  using namespace qmd;
  MaxQuadObjective mq({QuadraticPiece{SymmetricMatrix({{2.0}}), Vector{0.0}, 0.0}});
  FeasibleSet box = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  ProxSetup prox = ProxSetup::euclidean_on_box(box, Vector{-1.0});
  ObjectiveOracle objective = make_objective(mq, box);
  std::vector<ConstraintOracle> constraints{
      {[](const Vector& x) { return -x[0]; }, [](const Vector&) { return Vector{-1.0}; }, 1.0}};

  Problem problem{objective, constraints, prox, epsilon, std::sqrt(0.5), 0};
  Benchmark bench{problem, grid_solution(problem), objective.smoothness.lipschitz_grad,
                  objective.smoothness.jump_total};
  return bench;
}

// Two quadratic pieces in 2-D whose unconstrained minimizers violate the
// l1-ball constraint g(x) = ||x||_1 - 1, so the run mixes productive and
// non-productive steps. theta0 comes from the grid solution with a 2% margin.
inline Benchmark two_d_benchmark(double epsilon) {
  using namespace qmd;
  MaxQuadObjective mq({
      QuadraticPiece{SymmetricMatrix({{2.0, 0.0}, {0.0, 1.0}}), Vector{2.4, 0.8}, 0.0},
      QuadraticPiece{SymmetricMatrix({{1.0, 0.2}, {0.2, 1.5}}), Vector{0.6, 1.8}, -0.3},
  });
  FeasibleSet box = FeasibleSet::box(Vector{-1.5, -1.5}, Vector{1.5, 1.5});
  ProxSetup prox = ProxSetup::euclidean_on_box(box, Vector{0.0, 0.0});
  ObjectiveOracle objective = make_objective(mq, box);
  auto l1_residual = [](const Vector& x) { return norm(x, NormKind::L1) - 1.0; };
  auto l1_subgradient = [](const Vector& x) {
    Vector g = Vector::zeros(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
      g[i] = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0);
    }
    return g;
  };
  std::vector<ConstraintOracle> constraints{{l1_residual, l1_subgradient, std::sqrt(2.0)}};

  Problem problem{objective, constraints, prox, epsilon, 1.0, 0};
  Vector x_star = grid_solution(problem);
  problem.theta0 = 1.02 * std::sqrt(prox.prox_value(x_star));
  return Benchmark{problem, x_star, objective.smoothness.lipschitz_grad,
                   objective.smoothness.jump_total};
}

}  // namespace qmdtest

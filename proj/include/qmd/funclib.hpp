#pragma once

#include <cstddef>
#include <vector>

#include "qmd/geometry.hpp"
#include "qmd/oracles.hpp"

namespace qmd {

/// Piecewise-linear convex function on [0,1]: slope k on [0, 1/2], then a
/// geometric ladder of kinks at q_n = 1 - 2^-n where the slope gains
/// delta / 2^n, so the subdifferential-jump widths sum to delta. The gradient
/// is constant between kinks (L = 0). f(1) is the limit value k + delta/3.
class KinkLadderFunction {
 public:
  KinkLadderFunction(double k, double delta);

  double k() const { return k_; }
  double jump_total() const { return delta_; }

  double value(double t) const;
  SubgradientSet subdifferential(double t) const;
  bool is_kink(double t) const;

  /// q_n = 1 - 2^-n for n >= 1.
  static double kink_location(int n);

  /// Slope on (q_n, q_{n+1}); n = 0 is the initial branch [0, 1/2].
  double branch_slope(int n) const;

  /// Kinks beyond this index are below double resolution.
  static constexpr int kMaxBranch = 52;

 private:
  double k_;
  double delta_;
};

/// The kink ladder as a 1-D vector objective on [0,1].
ObjectiveOracle make_objective(const KinkLadderFunction& f);

/// The kink ladder composed with the affine parameter of the segment [a, b]:
/// x maps to t = <x - a, b - a> / ||b - a||^2, so the kink ladder accumulates
/// toward the b end. Declared jump budget rescales to delta / ||b - a||.
ObjectiveOracle lift_along_segment(const KinkLadderFunction& f, const Vector& a, const Vector& b);

/// Dense symmetric matrix; nearly-symmetric input is symmetrized, anything
/// worse is rejected.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::vector<std::vector<double>> rows);
  SymmetricMatrix(std::initializer_list<std::initializer_list<double>> rows);
  SymmetricMatrix(std::size_t n, std::vector<double> row_major);

  static SymmetricMatrix identity(std::size_t n);
  static SymmetricMatrix zero(std::size_t n);
  static SymmetricMatrix diagonal(std::vector<double> entries);

  std::size_t dim() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Vector apply(const Vector& x) const;
  double quad(const Vector& x) const;  // <Ax, x>

  double min_eigenvalue() const;
  double max_eigenvalue() const;
  /// Largest absolute eigenvalue, i.e. the spectral norm.
  double spectral_norm() const;

 private:
  std::size_t n_;
  std::vector<double> a_;  // row-major
};

/// One quadratic piece 0.5 <Ax, x> - <b, x> + alpha.
struct QuadraticPiece {
  SymmetricMatrix matrix;
  Vector linear;
  double offset = 0.0;

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;  // Ax - b
};

/// Pointwise maximum of quadratic pieces with positive-semidefinite matrices.
/// The subdifferential at x is the convex hull of the gradients of the active
/// pieces, with activity resolved up to 1e-9 * (1 + |value|).
class MaxQuadObjective {
 public:
  explicit MaxQuadObjective(std::vector<QuadraticPiece> pieces);

  std::size_t dim() const;
  std::size_t piece_count() const { return pieces_.size(); }
  const std::vector<QuadraticPiece>& pieces() const { return pieces_; }

  struct Eval {
    double value = 0.0;
    SubgradientSet subdifferential;
  };
  Eval eval(const Vector& x) const;

  bool is_kink(const Vector& x) const;

  /// max_i lambda_max(A_i): the Lipschitz constant of the gradient within a
  /// piece.
  double lipschitz_grad() const { return lipschitz_grad_; }

  static constexpr double kPsdTol = 1e-10;

 private:
  std::vector<QuadraticPiece> pieces_;
  double lipschitz_grad_ = 0.0;
};

/// Upper bound on the subdifferential-jump sum along any segment of `domain`,
/// in the dual of `primal`: along a line the active piece switches at most
/// 2(m-1) times and each switch jumps by at most the largest pairwise
/// gradient gap over the domain.
double jump_budget(const MaxQuadObjective& f, const FeasibleSet& domain,
                   NormKind primal = NormKind::Euclidean);

/// Oracle with jump budget 0; exact for a single piece, and adequate wherever
/// only values and subdifferentials are consumed.
ObjectiveOracle make_objective(const MaxQuadObjective& f);

/// Oracle whose declared jump budget comes from jump_budget over `domain`.
ObjectiveOracle make_objective(const MaxQuadObjective& f, const FeasibleSet& domain,
                               NormKind primal = NormKind::Euclidean);

}  // namespace qmd

#pragma once

#include "qmd/geometry.hpp"

namespace qmd {

enum class ProxKind { EuclideanOnBox, EuclideanOnBall, EntropyOnSimplex };

/// Prox structure: a continuously differentiable distance generator d that is
/// 1-strongly convex w.r.t. the setup's norm, its Bregman divergence
/// V(x, y) = d(y) - d(x) - <grad d(x), y - x>, the closed-form mirror step
/// argmin_{u in Q} { <h p, u> + V(x, u) }, and the start point argmin_Q d.
///
/// Euclidean setups use d(x) = 0.5 ||x - c||^2 with a configurable center
/// (the start point need not be the coordinate origin for shifted boxes);
/// the entropy setup uses d(x) = sum_i x_i ln x_i + ln n, which is zero at
/// the uniform distribution and 1-strongly convex w.r.t. the l1 norm on the
/// simplex.
class ProxSetup {
 public:
  static ProxSetup euclidean_on_box(FeasibleSet set);
  static ProxSetup euclidean_on_box(FeasibleSet set, Vector center);
  static ProxSetup euclidean_on_ball(FeasibleSet set);
  static ProxSetup euclidean_on_ball(FeasibleSet set, Vector center);
  static ProxSetup entropy_on_simplex(std::size_t dim);

  ProxKind kind() const { return kind_; }
  const FeasibleSet& set() const { return set_; }
  const Vector& center() const { return center_; }
  std::size_t dim() const { return set_.dim(); }

  /// Norm the setup is strongly convex against: Euclidean, or l1 for entropy.
  NormKind norm() const;

  double prox_value(const Vector& x) const;
  Vector prox_gradient(const Vector& x) const;

  /// V(x, y). Entropy setups require x in the relative interior.
  double bregman(const Vector& x, const Vector& y) const;

  /// Exact minimizer of <h p, u> + V(x, u) over the set: a projected gradient
  /// step for the Euclidean kinds, a renormalized multiplicative-weights
  /// update on the simplex.
  Vector mirror_step(const Vector& x, const Vector& p, double h) const;

  Vector start_point() const;

 private:
  ProxSetup(ProxKind kind, FeasibleSet set, Vector center);

  ProxKind kind_;
  FeasibleSet set_;
  Vector center_;
};

/// A-priori distance bound: d(x_*) <= theta0^2.
struct ThetaBound {
  double theta0 = 1.0;
};

/// Audit helper for benchmarks with a known solution.
bool theta_bound_holds(const ProxSetup& prox, const Vector& x_star, double theta0);

}  // namespace qmd

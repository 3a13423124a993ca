#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "qmd/geometry.hpp"

namespace qmd {

enum class SubgradientSetKind { Singleton, Interval, Hull };

/// Subdifferential at a point: a single gradient, an interval of slopes in
/// 1-D, or the convex hull of finitely many vertices. The subdifferentials of
/// all functions in this library are polyhedral, so a vertex representation
/// is exact.
class SubgradientSet {
 public:
  static SubgradientSet singleton(Vector v);
  static SubgradientSet interval(double lo, double hi);
  static SubgradientSet hull(std::vector<Vector> vertices);

  SubgradientSetKind kind() const { return kind_; }
  std::size_t dim() const { return vertices_.front().dim(); }
  bool is_singleton() const;

  /// Interval endpoints; valid for Interval sets only.
  std::pair<double, double> interval_bounds() const;

  /// Singleton -> one point, interval -> both endpoints, hull -> vertices.
  const std::vector<Vector>& extreme_points() const { return vertices_; }

  /// Membership up to tol: a vertex, an interval element, or a point on a
  /// segment between two vertices.
  bool contains(const Vector& v, double tol = 1e-9) const;

  /// Diameter in the dual of `primal`: max pairwise dual-norm distance of
  /// extreme points.
  double diameter(NormKind primal) const;

 private:
  SubgradientSet(SubgradientSetKind kind, std::vector<Vector> vertices);

  SubgradientSetKind kind_;
  std::vector<Vector> vertices_;  // interval stored as its two 1-D endpoints
};

/// Declared regularity of an objective: Lipschitz constant of the gradient
/// between kinks (L) and the total subdifferential-jump budget along any
/// segment (delta).
struct Smoothness {
  double lipschitz_grad = 0.0;
  double jump_total = 0.0;
};

/// First-order oracle for a quasiconvex locally Lipschitz objective.
struct ObjectiveOracle {
  std::function<double(const Vector&)> value;
  std::function<SubgradientSet(const Vector&)> subgradient_set;
  std::function<bool(const Vector&)> is_kink;
  Smoothness smoothness;
};

/// First-order oracle for a convex Lipschitz constraint g <= 0.
struct ConstraintOracle {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> subgradient;
  double lipschitz = 0.0;  // M_g
};

struct MaxConstraintResult {
  double value = 0.0;
  std::size_t index = 0;
};

/// Largest constraint value at x. Without a threshold the index is the argmax
/// (smallest index on ties); with a threshold it is the smallest index whose
/// value exceeds the threshold, falling back to the argmax when none does.
MaxConstraintResult max_constraint(const Vector& x,
                                   const std::vector<ConstraintOracle>& constraints,
                                   std::optional<double> violation_threshold = std::nullopt);

struct MinDualNorm {
  NormKind norm = NormKind::Euclidean;
};

struct ExtremePointIndex {
  std::size_t index = 0;
};

/// Scan extreme points plus a small interior grid for the element minimizing
/// the interpolation residual |f(y)-f(x)-<g,y-x>| - (L/2 ||y-x||^2 + delta ||y-x||).
struct BestForInterpolation {
  const ObjectiveOracle* objective = nullptr;
  Vector x;
  Vector y;
  double lipschitz_grad = 0.0;
  double jump_total = 0.0;
  NormKind norm = NormKind::Euclidean;
};

using SelectionRule = std::variant<MinDualNorm, ExtremePointIndex, BestForInterpolation>;

/// Pick one element of a subgradient set. MinDualNorm returns the exact
/// minimal-norm element of an interval (zero if the interval straddles it)
/// and the minimal vertex of a hull; ties go to the first candidate.
Vector select_subgradient(const SubgradientSet& set, const SelectionRule& rule);

}  // namespace qmd

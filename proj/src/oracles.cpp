#include "qmd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qmd {

SubgradientSet::SubgradientSet(SubgradientSetKind kind, std::vector<Vector> vertices)
    : kind_(kind), vertices_(std::move(vertices)) {}

SubgradientSet SubgradientSet::singleton(Vector v) {
  return SubgradientSet(SubgradientSetKind::Singleton, {std::move(v)});
}

SubgradientSet SubgradientSet::interval(double lo, double hi) {
  if (!(lo <= hi)) {
    throw std::invalid_argument("interval subdifferential requires lo <= hi");
  }
  return SubgradientSet(SubgradientSetKind::Interval, {Vector{lo}, Vector{hi}});
}

SubgradientSet SubgradientSet::hull(std::vector<Vector> vertices) {
  if (vertices.empty()) {
    throw std::invalid_argument("subdifferential must be nonempty");
  }
  const std::size_t d = vertices.front().dim();
  for (const Vector& v : vertices) {
    if (v.dim() != d) throw std::invalid_argument("hull vertices must share a dimension");
  }
  return SubgradientSet(SubgradientSetKind::Hull, std::move(vertices));
}

bool SubgradientSet::is_singleton() const {
  if (kind_ == SubgradientSetKind::Singleton) return true;
  for (const Vector& v : vertices_) {
    if (!(v == vertices_.front())) return false;
  }
  return true;
}

std::pair<double, double> SubgradientSet::interval_bounds() const {
  if (kind_ != SubgradientSetKind::Interval) {
    throw std::logic_error("interval_bounds on a non-interval subdifferential");
  }
  return {vertices_[0][0], vertices_[1][0]};
}

namespace {

double point_segment_distance(const Vector& p, const Vector& a, const Vector& b) {
  Vector d = b - a;
  double dd = dot(d, d);
  double t = dd > 0.0 ? std::clamp(dot(p - a, d) / dd, 0.0, 1.0) : 0.0;
  Vector proj = a + t * d;
  return norm(p - proj, NormKind::Euclidean);
}

}  // namespace

bool SubgradientSet::contains(const Vector& v, double tol) const {
  if (v.dim() != dim()) return false;
  if (kind_ == SubgradientSetKind::Interval) {
    auto [lo, hi] = interval_bounds();
    return v[0] >= lo - tol && v[0] <= hi + tol;
  }
  for (const Vector& w : vertices_) {
    if (norm(v - w, NormKind::LInf) <= tol) return true;
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      if (point_segment_distance(v, vertices_[i], vertices_[j]) <= tol) return true;
    }
  }
  return false;
}

double SubgradientSet::diameter(NormKind primal) const {
  double best = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      best = std::max(best, dual_norm(vertices_[i] - vertices_[j], primal));
    }
  }
  return best;
}

MaxConstraintResult max_constraint(const Vector& x,
                                   const std::vector<ConstraintOracle>& constraints,
                                   std::optional<double> violation_threshold) {
  if (constraints.empty()) {
    throw std::invalid_argument("max_constraint on an empty constraint list");
  }
  double best = -std::numeric_limits<double>::infinity();
  std::size_t argmax = 0;
  std::optional<std::size_t> first_violation;
  for (std::size_t m = 0; m < constraints.size(); ++m) {
    double v = constraints[m].value(x);
    if (v > best) {
      best = v;
      argmax = m;
    }
    if (violation_threshold && !first_violation && v > *violation_threshold) {
      first_violation = m;
    }
  }
  return {best, first_violation.value_or(argmax)};
}

namespace {

Vector min_dual_norm_element(const SubgradientSet& set, NormKind primal) {
  if (set.kind() == SubgradientSetKind::Interval) {
    auto [lo, hi] = set.interval_bounds();
    if (lo <= 0.0 && hi >= 0.0) return Vector{0.0};
    return std::abs(lo) <= std::abs(hi) ? Vector{lo} : Vector{hi};
  }
  const auto& pts = set.extreme_points();
  std::size_t best = 0;
  double best_norm = dual_norm(pts[0], primal);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    double n = dual_norm(pts[i], primal);
    if (n < best_norm) {
      best_norm = n;
      best = i;
    }
  }
  return pts[best];
}

std::vector<Vector> interpolation_candidates(const SubgradientSet& set) {
  std::vector<Vector> candidates = set.extreme_points();
  const auto& pts = set.extreme_points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      for (int g = 1; g <= 10; ++g) {
        double t = g / 11.0;
        candidates.push_back((1.0 - t) * pts[i] + t * pts[j]);
      }
    }
  }
  return candidates;
}

Vector best_for_interpolation(const SubgradientSet& set, const BestForInterpolation& rule) {
  if (rule.objective == nullptr) {
    throw std::invalid_argument("BestForInterpolation requires an objective");
  }
  const Vector d = rule.y - rule.x;
  const double dist = norm(d, rule.norm);
  const double budget =
      0.5 * rule.lipschitz_grad * dist * dist + rule.jump_total * dist;
  const double fy = rule.objective->value(rule.y);
  const double fx = rule.objective->value(rule.x);
  Vector best = set.extreme_points().front();
  double best_residual = std::numeric_limits<double>::infinity();
  for (const Vector& g : interpolation_candidates(set)) {
    double residual = std::abs(fy - fx - dot(g, d)) - budget;
    if (residual < best_residual) {
      best_residual = residual;
      best = g;
    }
  }
  return best;
}

}  // namespace

Vector select_subgradient(const SubgradientSet& set, const SelectionRule& rule) {
  if (const auto* r = std::get_if<MinDualNorm>(&rule)) {
    return min_dual_norm_element(set, r->norm);
  }
  if (const auto* r = std::get_if<ExtremePointIndex>(&rule)) {
    const auto& pts = set.extreme_points();
    if (r->index >= pts.size()) {
      throw std::invalid_argument("extreme point index out of range");
    }
    return pts[r->index];
  }
  return best_for_interpolation(set, std::get<BestForInterpolation>(rule));
}

}  // namespace qmd

#pragma once

#include <array>
#include <span>
#include <vector>

#include "qmd/geometry.hpp"
#include "qmd/oracles.hpp"

namespace qmd {

/// Kink inventory of a segment scan: parameters t in (0,1) where the one-sided
/// directional derivatives of phi(t) = f((1-t)x + ty) differ, and the
/// associated jump sizes (the derivative gap divided by ||y - x||, which is
/// the subdifferential diameter at the kink for aligned instances).
struct SegmentScan {
  Vector x;
  Vector y;
  std::vector<double> kink_params;
  std::vector<double> jump_sizes;
  double declared_lipschitz_grad = 0.0;
  double declared_jump_total = 0.0;
};

struct InterpolationReport {
  double residual = 0.0;
  Vector chosen_subgradient;
  bool holds = false;
};

inline constexpr std::array<double, 3> kDefaultClarkeRadii{1e-4, 1e-5, 1e-6};

/// Numerical Clarke upper directional derivative at x in direction h: the
/// supremum of forward difference quotients over nearby base points and
/// shrinking steps, Richardson-extrapolated per scale. Converges to
/// max_{v in subdiff f(x)} <v, h> on the piecewise instances of this library.
double clarke_dd_estimate(const ObjectiveOracle& f, const Vector& x, const Vector& h,
                          std::span<const double> radii = kDefaultClarkeRadii);

/// Locate the kinks of f along [x, y]. Candidate cells come from slope
/// differences of a uniform grid; each candidate is refined by bisection and
/// confirmed by extrapolated one-sided slopes measured clear of the located
/// parameter, so smooth curvature does not masquerade as a jump.
SegmentScan scan_segment(const ObjectiveOracle& f, const Vector& x, const Vector& y, int grid,
                         NormKind norm = NormKind::Euclidean);

/// Interpolation inequality check: the residual is
///   min_g |f(y) - f(x) - <g, y-x>| - (L/2 ||y-x||^2 + delta ||y-x||)
/// over extreme subgradients at x plus a small interior grid (the bound is
/// existential, and the residual is affine in g, so extreme points suffice).
InterpolationReport check_interpolation(const ObjectiveOracle& f, const Vector& x, const Vector& y,
                                        double lipschitz_grad, double jump_total,
                                        NormKind norm = NormKind::Euclidean);

/// Value of f(x) + (max_g ||g||_* + delta) ||y-x|| + L/2 ||y-x||^2; callers
/// assert f(y) does not exceed it.
double growth_upper_bound(const ObjectiveOracle& f, const Vector& x, const Vector& y,
                             double lipschitz_grad, double jump_total,
                             NormKind norm = NormKind::Euclidean);

}  // namespace qmd

#include "qmd/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace qmd {

double clarke_dd_estimate(const ObjectiveOracle& f, const Vector& x, const Vector& h,
                          std::span<const double> radii) {
  if (radii.empty()) {
    throw std::invalid_argument("clarke_dd_estimate requires a nonempty radius schedule");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] < radii[i - 1]))) {
      throw std::invalid_argument("radii must be positive and decreasing");
    }
  }
  std::vector<double> schedule(radii.begin(), radii.end());
  // Near a domain boundary the whole schedule can be inadmissible; shrinking
  // it further stays within the limsup semantics.
  for (int round = 0; round < 8; ++round) {
    double estimate = -std::numeric_limits<double>::infinity();
    for (double alpha : schedule) {
      double scale_best = -std::numeric_limits<double>::infinity();
      for (double s : {0.0, 0.5 * alpha, alpha, 2.0 * alpha}) {
        try {
          Vector base = x + s * h;
          double f0 = f.value(base);
          double q_half = (f.value(base + (0.5 * alpha) * h) - f0) / (0.5 * alpha);
          double q_full = (f.value(base + alpha * h) - f0) / alpha;
          scale_best = std::max(scale_best, 2.0 * q_half - q_full);
        } catch (const std::exception&) {
          // base point left the oracle's domain; skip the sample
        }
      }
      if (scale_best > -std::numeric_limits<double>::infinity()) {
        estimate = scale_best;  // keep the finest usable scale
      }
    }
    if (estimate > -std::numeric_limits<double>::infinity()) {
      return estimate;
    }
    for (double& r : schedule) r *= 0.125;
  }
  throw std::domain_error("no admissible sample points around x");
}

namespace {

struct Segment1D {
  const ObjectiveOracle* f;
  Vector x;
  Vector d;  // y - x

  double phi(double t) const { return f->value(x + t * d); }
  double slope(double a, double b) const { return (phi(b) - phi(a)) / (b - a); }
};

// One-sided slope at t from the given side, measured over windows that do not
// touch t itself (so localization error cannot contaminate the estimate).
// Window slopes behave like phi' + c*a on a smooth piece; two window sizes
// extrapolate the linear term away.
double one_sided_slope(const Segment1D& seg, double t, double a, int side) {
  double s1 = side > 0 ? seg.slope(t + a, t + 2.0 * a) : seg.slope(t - 2.0 * a, t - a);
  double s2 = side > 0 ? seg.slope(t + 2.0 * a, t + 4.0 * a) : seg.slope(t - 4.0 * a, t - 2.0 * a);
  return 2.0 * s1 - s2;
}

// Bisection on a bracket known to contain a slope discontinuity. Quarter
// slopes of a parabola have equal consecutive differences; a kink inflates
// exactly one of them, and the outlier tells which half (or the centered
// half) to keep, so the kink always stays interior. Stops when the bracket
// is tiny or the outlier falls under the rounding floor for the width.
double locate_kink(const Segment1D& seg, double lo, double hi, double value_scale) {
  while (hi - lo > 1e-12) {
    double w = hi - lo;
    double q1 = lo + 0.25 * w;
    double mid = lo + 0.5 * w;
    double q3 = lo + 0.75 * w;
    double s1 = seg.slope(lo, q1);
    double s2 = seg.slope(q1, mid);
    double s3 = seg.slope(mid, q3);
    double s4 = seg.slope(q3, hi);
    double d1 = s2 - s1, d2 = s3 - s2, d3 = s4 - s3;
    double med = std::max(std::min(d1, d2), std::min(std::max(d1, d2), d3));
    double e1 = std::abs(d1 - med), e2 = std::abs(d2 - med), e3 = std::abs(d3 - med);
    double noise = 64.0 * 1e-16 * (1.0 + value_scale) / w;
    if (std::max({e1, e2, e3}) <= noise) break;
    if (e1 >= e2 && e1 >= e3) {
      hi = mid;
    } else if (e3 >= e1 && e3 >= e2) {
      lo = mid;
    } else {
      lo = q1;
      hi = q3;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SegmentScan scan_segment(const ObjectiveOracle& f, const Vector& x, const Vector& y, int grid,
                         NormKind norm_kind) {
  if (grid < 2) throw std::invalid_argument("scan_segment requires grid >= 2");
  if (x == y) throw std::invalid_argument("scan_segment requires x != y");
  Segment1D seg{&f, x, y - x};
  const double dist = norm(seg.d, norm_kind);

  const std::size_t n = static_cast<std::size_t>(grid);
  std::vector<double> vals(n + 1);
  double value_scale = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    vals[i] = seg.phi(static_cast<double>(i) / static_cast<double>(n));
    value_scale = std::max(value_scale, std::abs(vals[i]));
  }
  std::vector<double> slopes(n);
  for (std::size_t i = 0; i < n; ++i) {
    slopes[i] = (vals[i + 1] - vals[i]) * static_cast<double>(n);
  }
  std::vector<double> diffs(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) diffs[i] = std::abs(slopes[i + 1] - slopes[i]);

  // Smooth curvature produces a uniform slope-difference level; jumps stand
  // far above it. The median estimates that level robustly.
  std::vector<double> sorted = diffs;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double noise_floor =
      8.0 * 1e-16 * (1.0 + value_scale) * static_cast<double>(n) + 1e-12;
  const double candidate_tol = std::max(noise_floor, 8.0 * median);

  std::vector<double> kinks;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (diffs[i] <= candidate_tol) continue;
    double lo = static_cast<double>(i) / static_cast<double>(n);
    double hi = static_cast<double>(i + 2) / static_cast<double>(n);
    double t = locate_kink(seg, lo, hi, value_scale);
    if (kinks.empty() || t - kinks.back() > 2e-10) {
      kinks.push_back(t);
    }
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end(),
                          [](double a, double b) { return std::abs(a - b) <= 2e-10; }),
              kinks.end());
  if (kinks.size() > 52) kinks.resize(52);

  // Measure jumps with windows bounded away from neighbor kinks and the
  // segment ends.
  SegmentScan scan{x, y, {}, {}, f.smoothness.lipschitz_grad, f.smoothness.jump_total};
  const double jump_tol = 1e-7 * (1.0 + value_scale);
  for (std::size_t i = 0; i < kinks.size(); ++i) {
    double t = kinks[i];
    double room_left = (i == 0 ? t : t - kinks[i - 1]);
    double room_right = (i + 1 == kinks.size() ? 1.0 - t : kinks[i + 1] - t);
    double a = std::min({1e-7, room_left / 8.0, room_right / 8.0});
    if (!(a > 1e-13)) continue;
    double gap = one_sided_slope(seg, t, a, +1) - one_sided_slope(seg, t, a, -1);
    if (gap <= jump_tol) continue;
    scan.kink_params.push_back(t);
    scan.jump_sizes.push_back(gap / dist);
  }
  return scan;
}

namespace {

std::vector<Vector> residual_candidates(const SubgradientSet& set) {
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

}  // namespace

InterpolationReport check_interpolation(const ObjectiveOracle& f, const Vector& x, const Vector& y,
                                        double lipschitz_grad, double jump_total,
                                        NormKind norm_kind) {
  const Vector d = y - x;
  const double dist = norm(d, norm_kind);
  const double budget = 0.5 * lipschitz_grad * dist * dist + jump_total * dist;
  const double fx = f.value(x);
  const double fy = f.value(y);
  SubgradientSet set = f.subgradient_set(x);

  double best_absdiff = std::numeric_limits<double>::infinity();
  Vector best = set.extreme_points().front();
  for (const Vector& g : residual_candidates(set)) {
    double absdiff = std::abs(fy - fx - dot(g, d));
    if (absdiff < best_absdiff) {
      best_absdiff = absdiff;
      best = g;
    }
  }
  const double scale = std::max({1.0, std::abs(fx), std::abs(fy)});
  InterpolationReport report;
  report.residual = best_absdiff - budget;
  report.chosen_subgradient = best;
  report.holds = report.residual <= 1e-8 * scale;
  return report;
}

double growth_upper_bound(const ObjectiveOracle& f, const Vector& x, const Vector& y,
                             double lipschitz_grad, double jump_total, NormKind norm_kind) {
  const double dist = norm(y - x, norm_kind);
  SubgradientSet set = f.subgradient_set(x);
  double max_norm = 0.0;
  for (const Vector& g : set.extreme_points()) {
    max_norm = std::max(max_norm, dual_norm(g, norm_kind));
  }
  return f.value(x) + (max_norm + jump_total) * dist + 0.5 * lipschitz_grad * dist * dist;
}

}  // namespace qmd

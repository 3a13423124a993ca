#include "qmd/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

namespace qmd {

namespace {

constexpr double kLogFloor = 1e-300;

void require_positive_coords(const Vector& x) {
  for (double c : x.coords()) {
    if (c <= 0.0) {
      throw std::domain_error("entropy prox requires strictly positive coordinates");
    }
  }
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

Vector project_box(const Vector& y, const Box& box) {
  Vector z = y;
  for (std::size_t i = 0; i < z.dim(); ++i) {
    z[i] = std::clamp(z[i], box.lower[i], box.upper[i]);
  }
  return z;
}

Vector project_ball(const Vector& y, const EuclideanBall& ball) {
  Vector d = y - ball.center;
  double n = norm(d, NormKind::Euclidean);
  if (n <= ball.radius) return y;
  return ball.center + (ball.radius / n) * d;
}

}  // namespace

ProxSetup::ProxSetup(ProxKind kind, FeasibleSet set, Vector center)
    : kind_(kind), set_(std::move(set)), center_(std::move(center)) {
  if (center_.dim() != set_.dim()) {
    throw std::invalid_argument("prox center dimension mismatch");
  }
}

ProxSetup ProxSetup::euclidean_on_box(FeasibleSet set) {
  Vector c = Vector::zeros(set.dim());
  return euclidean_on_box(std::move(set), std::move(c));
}

ProxSetup ProxSetup::euclidean_on_box(FeasibleSet set, Vector center) {
  if (!std::holds_alternative<Box>(set.shape())) {
    throw std::invalid_argument("euclidean_on_box requires a box set");
  }
  return ProxSetup(ProxKind::EuclideanOnBox, std::move(set), std::move(center));
}

ProxSetup ProxSetup::euclidean_on_ball(FeasibleSet set) {
  Vector c = Vector::zeros(set.dim());
  return euclidean_on_ball(std::move(set), std::move(c));
}

ProxSetup ProxSetup::euclidean_on_ball(FeasibleSet set, Vector center) {
  if (!std::holds_alternative<EuclideanBall>(set.shape())) {
    throw std::invalid_argument("euclidean_on_ball requires a ball set");
  }
  return ProxSetup(ProxKind::EuclideanOnBall, std::move(set), std::move(center));
}

ProxSetup ProxSetup::entropy_on_simplex(std::size_t dim) {
  return ProxSetup(ProxKind::EntropyOnSimplex, FeasibleSet::simplex(dim), Vector::zeros(dim));
}

NormKind ProxSetup::norm() const {
  return kind_ == ProxKind::EntropyOnSimplex ? NormKind::L1 : NormKind::Euclidean;
}

double ProxSetup::prox_value(const Vector& x) const {
  if (kind_ == ProxKind::EntropyOnSimplex) {
    double sum = 0.0;
    for (double c : x.coords()) sum += xlogx(c);
    return sum + std::log(static_cast<double>(dim()));
  }
  Vector d = x - center_;
  return 0.5 * dot(d, d);
}

Vector ProxSetup::prox_gradient(const Vector& x) const {
  if (kind_ == ProxKind::EntropyOnSimplex) {
    Vector g = Vector::zeros(dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
      g[i] = 1.0 + std::log(std::max(x[i], kLogFloor));
    }
    return g;
  }
  return x - center_;
}

double ProxSetup::bregman(const Vector& x, const Vector& y) const {
  if (kind_ == ProxKind::EntropyOnSimplex) {
    require_positive_coords(x);
    double v = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
      v += xlogx(y[i]) - xlogx(x[i]) - (1.0 + std::log(x[i])) * (y[i] - x[i]);
    }
    return v;
  }
  Vector d = y - x;
  return 0.5 * dot(d, d);
}

Vector ProxSetup::mirror_step(const Vector& x, const Vector& p, double h) const {
  if (!(h > 0.0)) {
    throw std::invalid_argument("mirror step requires h > 0");
  }
  if (!set_.contains(x)) {
    throw std::invalid_argument("mirror step from a point outside the set");
  }
  if (kind_ == ProxKind::EntropyOnSimplex) {
    require_positive_coords(x);
    // x_i exp(-h p_i) / Z, computed with the max exponent factored out.
    double shift = -h * p[0];
    for (std::size_t i = 1; i < p.dim(); ++i) shift = std::max(shift, -h * p[i]);
    std::vector<double> w(x.dim());
    double z = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
      w[i] = x[i] * std::exp(-h * p[i] - shift);
      z += w[i];
    }
    double sum = 0.0;
    for (double& c : w) {
      c = std::max(c / z, kLogFloor);
      sum += c;
    }
    for (double& c : w) c /= sum;
    return Vector(std::move(w));
  }
  Vector y = x - h * p;
  if (kind_ == ProxKind::EuclideanOnBox) {
    return project_box(y, std::get<Box>(set_.shape()));
  }
  return project_ball(y, std::get<EuclideanBall>(set_.shape()));
}

Vector ProxSetup::start_point() const {
  switch (kind_) {
    case ProxKind::EntropyOnSimplex: {
      std::size_t n = dim();
      return Vector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }
    case ProxKind::EuclideanOnBox:
      return project_box(center_, std::get<Box>(set_.shape()));
    case ProxKind::EuclideanOnBall:
      return project_ball(center_, std::get<EuclideanBall>(set_.shape()));
  }
  throw std::logic_error("unknown prox kind");
}

bool theta_bound_holds(const ProxSetup& prox, const Vector& x_star, double theta0) {
  return prox.prox_value(x_star) <= theta0 * theta0;
}

}  // namespace qmd

#include "qmd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qmd {

namespace {

void require_valid(const std::vector<double>& coords) {
  if (coords.empty()) {
    throw std::invalid_argument("vector must have dimension >= 1");
  }
  for (double c : coords) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("vector coordinates must be finite");
    }
  }
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("dimension mismatch");
  }
}

}  // namespace

Vector::Vector(std::vector<double> coords) : coords_(std::move(coords)) {
  require_valid(coords_);
}

Vector::Vector(std::initializer_list<double> coords) : coords_(coords) {
  require_valid(coords_);
}

Vector Vector::zeros(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("vector must have dimension >= 1");
  }
  Vector v;
  v.coords_.assign(n, 0.0);
  return v;
}

Vector& Vector::operator+=(const Vector& rhs) {
  require_same_dim(dim(), rhs.dim());
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& rhs) {
  require_same_dim(dim(), rhs.dim());
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& c : coords_) c *= s;
  return *this;
}

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a.dim(), b.dim());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
  return sum;
}

std::ostream& operator<<(std::ostream& os, const Vector& v) {
  os << '(';
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  return os << ')';
}

NormKind dual(NormKind kind) {
  switch (kind) {
    case NormKind::Euclidean:
      return NormKind::Euclidean;
    case NormKind::L1:
      return NormKind::LInf;
    case NormKind::LInf:
      return NormKind::L1;
  }
  throw std::logic_error("unknown norm kind");
}

double norm(const Vector& v, NormKind kind) {
  if (v.dim() == 0) {
    throw std::invalid_argument("norm of a dimension-zero vector");
  }
  switch (kind) {
    case NormKind::Euclidean: {
      double sum = 0.0;
      for (double c : v.coords()) sum += c * c;
      return std::sqrt(sum);
    }
    case NormKind::L1: {
      double sum = 0.0;
      for (double c : v.coords()) sum += std::abs(c);
      return sum;
    }
    case NormKind::LInf: {
      double m = 0.0;
      for (double c : v.coords()) m = std::max(m, std::abs(c));
      return m;
    }
  }
  throw std::logic_error("unknown norm kind");
}

double dual_norm(const Vector& v, NormKind kind) { return norm(v, dual(kind)); }

FeasibleSet::FeasibleSet(Shape shape, double tol) : shape_(std::move(shape)), tol_(tol) {
  if (tol_ < 0.0) {
    throw std::invalid_argument("membership tolerance must be >= 0");
  }
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper, double tol) {
  require_same_dim(lower.dim(), upper.dim());
  for (std::size_t i = 0; i < lower.dim(); ++i) {
    if (lower[i] > upper[i]) {
      throw std::invalid_argument("box requires lower <= upper in every coordinate");
    }
  }
  return FeasibleSet(Box{std::move(lower), std::move(upper)}, tol);
}

FeasibleSet FeasibleSet::ball(Vector center, double radius, double tol) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("ball radius must be > 0");
  }
  return FeasibleSet(EuclideanBall{std::move(center), radius}, tol);
}

FeasibleSet FeasibleSet::simplex(std::size_t dim, double tol) {
  if (dim == 0) {
    throw std::invalid_argument("simplex dimension must be >= 1");
  }
  return FeasibleSet(Simplex{dim}, tol);
}

std::size_t FeasibleSet::dim() const {
  if (const auto* b = std::get_if<Box>(&shape_)) return b->lower.dim();
  if (const auto* s = std::get_if<EuclideanBall>(&shape_)) return s->center.dim();
  return std::get<Simplex>(shape_).dim;
}

bool FeasibleSet::contains(const Vector& x) const {
  require_same_dim(x.dim(), dim());
  if (const auto* b = std::get_if<Box>(&shape_)) {
    for (std::size_t i = 0; i < x.dim(); ++i) {
      if (x[i] < b->lower[i] - tol_ || x[i] > b->upper[i] + tol_) return false;
    }
    return true;
  }
  if (const auto* s = std::get_if<EuclideanBall>(&shape_)) {
    return norm(x - s->center, NormKind::Euclidean) <= s->radius + tol_;
  }
  double sum = 0.0;
  for (double c : x.coords()) {
    if (c < -tol_) return false;
    sum += c;
  }
  return std::abs(sum - 1.0) <= tol_;
}

Box FeasibleSet::bounding_box() const {
  if (const auto* b = std::get_if<Box>(&shape_)) return *b;
  if (const auto* s = std::get_if<EuclideanBall>(&shape_)) {
    Vector lo = s->center, hi = s->center;
    for (std::size_t i = 0; i < lo.dim(); ++i) {
      lo[i] -= s->radius;
      hi[i] += s->radius;
    }
    return Box{lo, hi};
  }
  std::size_t n = std::get<Simplex>(shape_).dim;
  return Box{Vector::zeros(n), Vector(std::vector<double>(n, 1.0))};
}

}  // namespace qmd

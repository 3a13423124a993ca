#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <variant>
#include <vector>

namespace qmd {

/// Dense point in R^n. Construction rejects empty or non-finite data.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::vector<double> coords);
  Vector(std::initializer_list<double> coords);

  static Vector zeros(std::size_t n);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

  Vector& operator+=(const Vector& rhs);
  Vector& operator-=(const Vector& rhs);
  Vector& operator*=(double s);

  friend Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
  friend Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
  friend Vector operator*(double s, Vector v) { return v *= s; }
  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> coords_;
};

double dot(const Vector& a, const Vector& b);

std::ostream& operator<<(std::ostream& os, const Vector& v);

enum class NormKind { Euclidean, L1, LInf };

/// Dual pairing: Euclidean is self-dual, L1 and LInf are dual to each other.
NormKind dual(NormKind kind);

double norm(const Vector& v, NormKind kind);

/// ||v||_* for the given primal norm, i.e. norm(v, dual(kind)).
double dual_norm(const Vector& v, NormKind kind);

struct Box {
  Vector lower;
  Vector upper;
};

struct EuclideanBall {
  Vector center;
  double radius = 1.0;
};

struct Simplex {
  std::size_t dim = 1;
};

/// Closed convex feasible set with a membership tolerance. Mirror steps land
/// on the boundary up to rounding, so membership is tested with slack.
class FeasibleSet {
 public:
  using Shape = std::variant<Box, EuclideanBall, Simplex>;

  static constexpr double kDefaultTol = 1e-9;

  static FeasibleSet box(Vector lower, Vector upper, double tol = kDefaultTol);
  static FeasibleSet ball(Vector center, double radius, double tol = kDefaultTol);
  static FeasibleSet simplex(std::size_t dim, double tol = kDefaultTol);

  std::size_t dim() const;
  bool contains(const Vector& x) const;
  double tolerance() const { return tol_; }
  const Shape& shape() const { return shape_; }

  /// Smallest axis-aligned box enclosing the set (used by grid scans).
  Box bounding_box() const;

 private:
  FeasibleSet(Shape shape, double tol);

  Shape shape_;
  double tol_;
};

}  // namespace qmd

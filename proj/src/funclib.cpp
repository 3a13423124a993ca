#include "qmd/funclib.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qmd {

namespace {

constexpr double kKinkTol = 1e-14;

struct Branch {
  int n = 0;
  double slope = 0.0;
  double intercept = 0.0;
};

// Branch n covers (q_n, q_{n+1}] with q_0 = 0. Slopes and intercepts are
// accumulated iteratively so partial sums stay exact for n <= 52.
Branch branch_at(double k, double delta, double t) {
  Branch b{0, k, 0.0};
  double half_pow = 0.5;  // 2^-(n+1) for the current n
  while (b.n < KinkLadderFunction::kMaxBranch && t > 1.0 - half_pow) {
    ++b.n;
    double gain = delta * half_pow;  // delta * 2^-n after the increment
    b.slope += gain;
    b.intercept -= gain * (1.0 - half_pow);  // q_n = 1 - 2^-n
    half_pow *= 0.5;
  }
  return b;
}

}  // namespace

KinkLadderFunction::KinkLadderFunction(double k, double delta) : k_(k), delta_(delta) {
  if (!(k > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument("kink ladder requires k > 0 and delta > 0");
  }
}

double KinkLadderFunction::kink_location(int n) {
  if (n < 1 || n > kMaxBranch) {
    throw std::invalid_argument("kink index out of range");
  }
  double pow = 1.0;
  for (int i = 0; i < n; ++i) pow *= 0.5;
  return 1.0 - pow;
}

double KinkLadderFunction::branch_slope(int n) const {
  if (n < 0) throw std::invalid_argument("branch index must be >= 0");
  double slope = k_;
  double pow = 1.0;
  for (int i = 1; i <= std::min(n, kMaxBranch); ++i) {
    pow *= 0.5;
    slope += delta_ * pow;
  }
  return slope;
}

double KinkLadderFunction::value(double t) const {
  if (t < 0.0 || t > 1.0) {
    throw std::invalid_argument("kink ladder is defined on [0, 1]");
  }
  if (t == 1.0) return k_ + delta_ / 3.0;  // limit value
  Branch b = branch_at(k_, delta_, t);
  return b.slope * t + b.intercept;
}

bool KinkLadderFunction::is_kink(double t) const {
  if (!(t > 0.0) || t >= 1.0) return false;
  double q = 0.0;
  double pow = 1.0;
  for (int n = 1; n <= kMaxBranch; ++n) {
    pow *= 0.5;
    q = 1.0 - pow;
    if (std::abs(t - q) <= kKinkTol) return true;
    if (q - t > kKinkTol) break;  // kinks only get closer to 1
  }
  return false;
}

SubgradientSet KinkLadderFunction::subdifferential(double t) const {
  if (t < 0.0 || t > 1.0) {
    throw std::invalid_argument("kink ladder is defined on [0, 1]");
  }
  if (t == 1.0) return SubgradientSet::singleton(Vector{k_ + delta_});
  double pow = 1.0;
  double slope = k_;
  for (int n = 1; n <= kMaxBranch; ++n) {
    pow *= 0.5;
    double q = 1.0 - pow;
    double next_slope = slope + delta_ * pow;
    if (std::abs(t - q) <= kKinkTol) {
      return SubgradientSet::interval(slope, next_slope);
    }
    if (t < q) break;
    slope = next_slope;
  }
  return SubgradientSet::singleton(Vector{branch_at(k_, delta_, t).slope});
}

ObjectiveOracle make_objective(const KinkLadderFunction& f) {
  auto check = [](const Vector& x) {
    if (x.dim() != 1) throw std::invalid_argument("kink ladder oracle expects 1-D input");
  };
  return ObjectiveOracle{
      .value = [f, check](const Vector& x) { check(x); return f.value(x[0]); },
      .subgradient_set = [f, check](const Vector& x) { check(x); return f.subdifferential(x[0]); },
      .is_kink = [f, check](const Vector& x) { check(x); return f.is_kink(x[0]); },
      .smoothness = {0.0, f.jump_total()},
  };
}

ObjectiveOracle lift_along_segment(const KinkLadderFunction& f, const Vector& a, const Vector& b) {
  Vector d = b - a;
  double len2 = dot(d, d);
  if (len2 == 0.0) {
    throw std::invalid_argument("lift_along_segment requires a != b");
  }
  Vector u = (1.0 / len2) * d;
  auto param = [a, u](const Vector& x) {
    double t = dot(x - a, u);
    if (t < -1e-12 || t > 1.0 + 1e-12) {
      throw std::invalid_argument("point parameterizes outside [0, 1]");
    }
    return std::clamp(t, 0.0, 1.0);
  };
  auto subgrad = [f, u, param](const Vector& x) {
    SubgradientSet s = f.subdifferential(param(x));
    if (s.kind() == SubgradientSetKind::Interval) {
      auto [lo, hi] = s.interval_bounds();
      if (u.dim() == 1) {
        double p = lo * u[0], q = hi * u[0];
        return SubgradientSet::interval(std::min(p, q), std::max(p, q));
      }
      return SubgradientSet::hull({lo * u, hi * u});
    }
    return SubgradientSet::singleton(s.extreme_points().front()[0] * u);
  };
  return ObjectiveOracle{
      .value = [f, param](const Vector& x) { return f.value(param(x)); },
      .subgradient_set = subgrad,
      .is_kink = [f, param](const Vector& x) { return f.is_kink(param(x)); },
      .smoothness = {0.0, f.jump_total() / std::sqrt(len2)},
  };
}

namespace {

std::vector<double> flatten_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw std::invalid_argument("matrix must have dimension >= 1");
  std::vector<double> a;
  a.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw std::invalid_argument("matrix rows must have equal length");
    a.insert(a.end(), row.begin(), row.end());
  }
  return a;
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(std::vector<std::vector<double>> rows)
    : SymmetricMatrix(rows.size(), flatten_rows(rows)) {}

SymmetricMatrix::SymmetricMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SymmetricMatrix(std::vector<std::vector<double>>(rows.begin(), rows.end())) {}

SymmetricMatrix::SymmetricMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), a_(std::move(row_major)) {
  if (n_ == 0 || a_.size() != n_ * n_) {
    throw std::invalid_argument("matrix data size mismatch");
  }
  double scale = 0.0;
  for (double v : a_) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      double& ij = a_[i * n_ + j];
      double& ji = a_[j * n_ + i];
      if (std::abs(ij - ji) > 1e-9 * (1.0 + scale)) {
        throw std::invalid_argument("matrix is not symmetric");
      }
      double avg = 0.5 * (ij + ji);
      ij = ji = avg;
    }
  }
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 1.0;
  return SymmetricMatrix(n, std::move(a));
}

SymmetricMatrix SymmetricMatrix::zero(std::size_t n) {
  return SymmetricMatrix(n, std::vector<double>(n * n, 0.0));
}

SymmetricMatrix SymmetricMatrix::diagonal(std::vector<double> entries) {
  std::size_t n = entries.size();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = entries[i];
  return SymmetricMatrix(n, std::move(a));
}

Vector SymmetricMatrix::apply(const Vector& x) const {
  if (x.dim() != n_) throw std::invalid_argument("dimension mismatch");
  Vector y = Vector::zeros(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * x[j];
    y[i] = s;
  }
  return y;
}

double SymmetricMatrix::quad(const Vector& x) const { return dot(apply(x), x); }

double SymmetricMatrix::min_eigenvalue() const {
  Eigen::Map<const Eigen::MatrixXd> m(a_.data(), n_, n_);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

double SymmetricMatrix::max_eigenvalue() const {
  Eigen::Map<const Eigen::MatrixXd> m(a_.data(), n_, n_);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

double SymmetricMatrix::spectral_norm() const {
  return std::max(std::abs(min_eigenvalue()), std::abs(max_eigenvalue()));
}

double QuadraticPiece::value(const Vector& x) const {
  return 0.5 * matrix.quad(x) - dot(linear, x) + offset;
}

Vector QuadraticPiece::gradient(const Vector& x) const { return matrix.apply(x) - linear; }

MaxQuadObjective::MaxQuadObjective(std::vector<QuadraticPiece> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) {
    throw std::invalid_argument("max-of-quadratics requires at least one piece");
  }
  const std::size_t d = pieces_.front().matrix.dim();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const QuadraticPiece& p = pieces_[i];
    if (p.matrix.dim() != d || p.linear.dim() != d) {
      throw std::invalid_argument("piece " + std::to_string(i) + " has inconsistent dimensions");
    }
    double min_eig = p.matrix.min_eigenvalue();
    if (min_eig < -kPsdTol) {
      throw std::invalid_argument("piece " + std::to_string(i) +
                                  " is not positive semidefinite (min eigenvalue " +
                                  std::to_string(min_eig) + ")");
    }
    lipschitz_grad_ = std::max(lipschitz_grad_, p.matrix.max_eigenvalue());
  }
}

std::size_t MaxQuadObjective::dim() const { return pieces_.front().matrix.dim(); }

MaxQuadObjective::Eval MaxQuadObjective::eval(const Vector& x) const {
  if (x.dim() != dim()) throw std::invalid_argument("dimension mismatch");
  std::vector<double> values(pieces_.size());
  double vmax = -HUGE_VAL;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    values[i] = pieces_[i].value(x);
    vmax = std::max(vmax, values[i]);
  }
  const double activity_tol = 1e-9 * (1.0 + std::abs(vmax));
  std::vector<Vector> grads;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (values[i] >= vmax - activity_tol) grads.push_back(pieces_[i].gradient(x));
  }
  if (grads.size() == 1) {
    return {vmax, SubgradientSet::singleton(std::move(grads.front()))};
  }
  return {vmax, SubgradientSet::hull(std::move(grads))};
}

bool MaxQuadObjective::is_kink(const Vector& x) const {
  return !eval(x).subdifferential.is_singleton();
}

double jump_budget(const MaxQuadObjective& f, const FeasibleSet& domain, NormKind primal) {
  const std::size_t m = f.piece_count();
  if (m < 2) return 0.0;
  // max ||x||_2 over the domain, from the bounding box.
  Box bb = domain.bounding_box();
  double radius2 = 0.0;
  for (std::size_t i = 0; i < bb.lower.dim(); ++i) {
    double c = std::max(std::abs(bb.lower[i]), std::abs(bb.upper[i]));
    radius2 += c * c;
  }
  double radius = std::sqrt(radius2);
  double max_gap = 0.0;
  const auto& pieces = f.pieces();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      std::size_t n = pieces[i].matrix.dim();
      std::vector<double> diff(n * n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          diff[r * n + c] = pieces[i].matrix(r, c) - pieces[j].matrix(r, c);
        }
      }
      SymmetricMatrix da(n, std::move(diff));
      double gap = da.spectral_norm() * radius +
                   norm(pieces[i].linear - pieces[j].linear, NormKind::Euclidean);
      max_gap = std::max(max_gap, gap);
    }
  }
  // Convert the Euclidean bound into the requested dual norm.
  double factor = 1.0;
  if (primal == NormKind::LInf) factor = std::sqrt(static_cast<double>(f.dim()));
  return 2.0 * static_cast<double>(m - 1) * max_gap * factor;
}

namespace {

ObjectiveOracle maxquad_oracle(std::shared_ptr<const MaxQuadObjective> f, double delta) {
  return ObjectiveOracle{
      .value = [f](const Vector& x) { return f->eval(x).value; },
      .subgradient_set = [f](const Vector& x) { return f->eval(x).subdifferential; },
      .is_kink = [f](const Vector& x) { return f->is_kink(x); },
      .smoothness = {f->lipschitz_grad(), delta},
  };
}

}  // namespace

ObjectiveOracle make_objective(const MaxQuadObjective& f) {
  return maxquad_oracle(std::make_shared<MaxQuadObjective>(f), 0.0);
}

ObjectiveOracle make_objective(const MaxQuadObjective& f, const FeasibleSet& domain,
                               NormKind primal) {
  double delta = jump_budget(f, domain, primal);
  return maxquad_oracle(std::make_shared<MaxQuadObjective>(f), delta);
}

}  // namespace qmd

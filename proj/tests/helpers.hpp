#pragma once

// Shared test utilities: deterministic RNG draws, brute-force reference
// minimizers, and a grid oracle for benchmark solutions. Everything here is
// independent of the solver under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <variant>
#include <vector>

#include "qmd/geometry.hpp"
#include "qmd/oracles.hpp"
#include "qmd/prox.hpp"

namespace qmdtest {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline qmd::Vector random_vector(Rng& rng, std::size_t dim, double lo, double hi) {
  std::vector<double> c(dim);
  for (double& v : c) v = uniform(rng, lo, hi);
  return qmd::Vector(std::move(c));
}

inline qmd::Vector random_feasible(Rng& rng, const qmd::FeasibleSet& set) {
  if (std::holds_alternative<qmd::Simplex>(set.shape())) {
    std::vector<double> w(set.dim());
    double sum = 0.0;
    for (double& c : w) {
      c = -std::log(std::max(uniform(rng, 0.0, 1.0), 1e-16));
      sum += c;
    }
    for (double& c : w) c /= sum;
    return qmd::Vector(std::move(w));
  }
  qmd::Box bb = set.bounding_box();
  for (int attempt = 0; attempt < 10000; ++attempt) {
    qmd::Vector x = qmd::Vector::zeros(set.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
      x[i] = uniform(rng, bb.lower[i], bb.upper[i]);
    }
    if (set.contains(x)) return x;
  }
  throw std::runtime_error("random_feasible: rejection sampling failed");
}

// Interior point of the simplex / set, bounded away from the boundary, for
// entropy draws.
inline qmd::Vector random_simplex_interior(Rng& rng, std::size_t dim, double floor = 1e-3) {
  std::vector<double> w(dim);
  double sum = 0.0;
  for (double& c : w) {
    c = floor - std::log(std::max(uniform(rng, 0.0, 1.0), 1e-12));
    sum += c;
  }
  for (double& c : w) c /= sum;
  return qmd::Vector(std::move(w));
}

// Nested-grid minimizer of the convex mirror-step objective
// F(u) = h <p, u> + V(x, u) over the prox set. Never uses the closed form.
inline qmd::Vector brute_force_mirror_step(const qmd::ProxSetup& prox, const qmd::Vector& x,
                                           const qmd::Vector& p, double h, int levels = 45) {
  const auto objective = [&](const qmd::Vector& u) {
    return h * qmd::dot(p, u) + prox.bregman(x, u);
  };

  struct Param {
    std::vector<double> lo, hi;
    std::function<std::optional<qmd::Vector>(const std::vector<double>&)> lift;
  } param;

  const qmd::FeasibleSet& set = prox.set();
  if (const auto* box = std::get_if<qmd::Box>(&set.shape())) {
    param.lo = box->lower.coords();
    param.hi = box->upper.coords();
    param.lift = [](const std::vector<double>& u) { return qmd::Vector(u); };
  } else if (const auto* ball = std::get_if<qmd::EuclideanBall>(&set.shape())) {
    qmd::Box bb = set.bounding_box();
    param.lo = bb.lower.coords();
    param.hi = bb.upper.coords();
    qmd::EuclideanBall b = *ball;
    // map candidates onto the ball instead of rejecting them, so the zoom
    // tracks boundary minimizers smoothly
    param.lift = [b](const std::vector<double>& u) -> std::optional<qmd::Vector> {
      qmd::Vector v(u);
      qmd::Vector d = v - b.center;
      double n = qmd::norm(d, qmd::NormKind::Euclidean);
      if (n <= b.radius) return v;
      return b.center + (b.radius / n) * d;
    };
  } else {
    std::size_t n = set.dim();
    param.lo.assign(n > 1 ? n - 1 : 0, 0.0);
    param.hi.assign(n > 1 ? n - 1 : 0, 1.0);
    param.lift = [n](const std::vector<double>& u) -> std::optional<qmd::Vector> {
      std::vector<double> v(n);
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        v[i] = std::max(u[i], 1e-300);
        sum += v[i];
      }
      if (sum > 1.0) return std::nullopt;
      v[n - 1] = std::max(1.0 - sum, 1e-300);
      return qmd::Vector(std::move(v));
    };
  }

  const std::size_t free_dims = param.lo.size();
  if (free_dims == 0) return *param.lift({});

  constexpr int kPerDim = 13;
  std::vector<double> lo = param.lo, hi = param.hi;
  std::vector<double> best_u(free_dims, 0.0);
  qmd::Vector best = x;
  double best_value = objective(x);
  {
    // seed with the feasible start point x itself (projected to parameters)
    for (std::size_t d = 0; d < free_dims; ++d) best_u[d] = x[d];
  }

  std::vector<int> idx(free_dims, 0);
  std::vector<double> u(free_dims, 0.0);
  for (int level = 0; level < levels; ++level) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      for (std::size_t d = 0; d < free_dims; ++d) {
        u[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (kPerDim - 1);
      }
      if (auto cand = param.lift(u)) {
        double v = objective(*cand);
        if (v < best_value) {
          best_value = v;
          best = *cand;
          best_u = u;
        }
      }
      std::size_t d = 0;
      while (d < free_dims && ++idx[d] == kPerDim) {
        idx[d] = 0;
        ++d;
      }
      if (d == free_dims) break;
    }
    for (std::size_t d = 0; d < free_dims; ++d) {
      double half = 0.3 * (hi[d] - lo[d]);
      lo[d] = std::max(param.lo[d], best_u[d] - half);
      hi[d] = std::min(param.hi[d], best_u[d] + half);
    }
  }
  return best;
}

}  // namespace qmdtest

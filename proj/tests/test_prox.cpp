#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qmd/prox.hpp"

#include "helpers.hpp"

using namespace qmd;

namespace {

ProxSetup box_setup(Vector lo, Vector hi, Vector center) {
  return ProxSetup::euclidean_on_box(FeasibleSet::box(std::move(lo), std::move(hi)),
                                     std::move(center));
}

}  // namespace

TEST_CASE("bregman closed forms") {
  ProxSetup euclid = box_setup(Vector{-10.0, -10.0}, Vector{10.0, 10.0}, Vector{0.0, 0.0});
  CHECK(euclid.bregman(Vector{0.3, 0.7}, Vector{0.3, 0.7}) == 0.0);
  CHECK(euclid.bregman(Vector{0.0, 0.0}, Vector{3.0, 4.0}) == doctest::Approx(12.5));

  ProxSetup entropy = ProxSetup::entropy_on_simplex(2);
  Vector x{0.5, 0.5}, y{0.25, 0.75};
  // KL(y || x), computed independently
  double kl = 0.25 * std::log(0.25 / 0.5) + 0.75 * std::log(0.75 / 0.5);
  CHECK(entropy.bregman(x, y) == doctest::Approx(kl).epsilon(1e-12));
  CHECK(entropy.bregman(x, y) == doctest::Approx(0.130812).epsilon(1e-5));
  // 1-strong convexity in l1: V >= 0.5 ||y - x||_1^2 = 0.125
  CHECK(entropy.bregman(x, y) >= 0.125);
  CHECK_THROWS_AS(entropy.bregman(Vector{0.0, 1.0}, y), std::domain_error);
}

TEST_CASE("mirror step closed forms") {
  ProxSetup big_box = box_setup(Vector{-100.0, -100.0}, Vector{100.0, 100.0}, Vector{0.0, 0.0});
  CHECK(big_box.mirror_step(Vector{1.0, 1.0}, Vector{1.0, 0.0}, 0.5) == Vector{0.5, 1.0});

  ProxSetup ball = ProxSetup::euclidean_on_ball(FeasibleSet::ball(Vector{0.0, 0.0}, 1.0));
  Vector z = ball.mirror_step(Vector{1.0, 0.0}, Vector{-2.0, 0.0}, 1.0);
  CHECK(z == Vector{1.0, 0.0});  // candidate (3, 0) projects radially back

  ProxSetup entropy = ProxSetup::entropy_on_simplex(2);
  Vector step = entropy.mirror_step(Vector{0.5, 0.5}, Vector{std::log(2.0), 0.0}, 1.0);
  CHECK(step[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(step[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mirror step validation") {
  ProxSetup box = box_setup(Vector{0.0}, Vector{1.0}, Vector{0.0});
  CHECK_THROWS_AS(box.mirror_step(Vector{0.5}, Vector{1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(box.mirror_step(Vector{0.5}, Vector{1.0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(box.mirror_step(Vector{2.0}, Vector{1.0}, 0.1), std::invalid_argument);
  ProxSetup entropy = ProxSetup::entropy_on_simplex(2);
  CHECK_THROWS_AS(entropy.mirror_step(Vector{1.0, 0.0}, Vector{1.0, 1.0}, 0.1),
                  std::domain_error);
}

TEST_CASE("start points") {
  ProxSetup entropy = ProxSetup::entropy_on_simplex(3);
  Vector u = entropy.start_point();
  for (std::size_t i = 0; i < 3; ++i) CHECK(u[i] == doctest::Approx(1.0 / 3.0));
  CHECK(entropy.prox_value(u) == doctest::Approx(0.0).epsilon(1e-15));

  CHECK(box_setup(Vector{0.0, 0.0}, Vector{1.0, 1.0}, Vector{0.0, 0.0}).start_point() ==
        Vector{0.0, 0.0});

  ProxSetup ball = ProxSetup::euclidean_on_ball(FeasibleSet::ball(Vector{2.0, 0.0}, 1.0),
                                                Vector{0.0, 0.0});
  CHECK(ball.start_point() == Vector{1.0, 0.0});
}

TEST_CASE("strong convexity of the divergence") {
  qmdtest::Rng rng(23);
  ProxSetup euclid = box_setup(Vector{-5.0, -5.0, -5.0}, Vector{5.0, 5.0, 5.0},
                               Vector{0.0, 0.0, 0.0});
  ProxSetup entropy = ProxSetup::entropy_on_simplex(3);
  for (int i = 0; i < 500; ++i) {
    Vector x = qmdtest::random_vector(rng, 3, -5.0, 5.0);
    Vector y = qmdtest::random_vector(rng, 3, -5.0, 5.0);
    double n = norm(x - y, euclid.norm());
    CHECK(euclid.bregman(x, y) >= 0.5 * n * n - 1e-9);

    Vector a = qmdtest::random_simplex_interior(rng, 3);
    Vector b = qmdtest::random_simplex_interior(rng, 3);
    double n1 = norm(a - b, entropy.norm());
    CHECK(entropy.bregman(a, b) >= 0.5 * n1 * n1 - 1e-9);
    // gradient monotonicity form of the same property
    CHECK(dot(entropy.prox_gradient(a) - entropy.prox_gradient(b), a - b) >= n1 * n1 - 1e-9);
  }
}

TEST_CASE("mirror step first-order optimality") {
  qmdtest::Rng rng(29);
  ProxSetup box = box_setup(Vector{-1.0, -1.0}, Vector{1.0, 1.0}, Vector{0.2, -0.3});
  ProxSetup ball = ProxSetup::euclidean_on_ball(FeasibleSet::ball(Vector{0.1, 0.0}, 1.5));
  ProxSetup entropy = ProxSetup::entropy_on_simplex(2);
  for (const ProxSetup& prox : {box, ball, entropy}) {
    for (int i = 0; i < 300; ++i) {
      Vector x = prox.kind() == ProxKind::EntropyOnSimplex
                     ? qmdtest::random_simplex_interior(rng, 2)
                     : qmdtest::random_feasible(rng, prox.set());
      Vector p = qmdtest::random_vector(rng, 2, -3.0, 3.0);
      double h = qmdtest::uniform(rng, 0.01, 2.0);
      Vector z = prox.mirror_step(x, p, h);
      CHECK(prox.set().contains(z));
      Vector u = prox.kind() == ProxKind::EntropyOnSimplex
                     ? qmdtest::random_simplex_interior(rng, 2)
                     : qmdtest::random_feasible(rng, prox.set());
      Vector grad_term = h * p + prox.prox_gradient(z) - prox.prox_gradient(x);
      CHECK(dot(grad_term, u - z) >= -1e-7);
    }
  }
}

TEST_CASE("per-step inequality from the mirror step") {
  // h <p, x-u> <= h^2/2 ||p||_*^2 + V(x,u) - V(z,u), evaluated directly
  qmdtest::Rng rng(31);
  ProxSetup box = box_setup(Vector{-2.0, -2.0, -2.0}, Vector{2.0, 2.0, 2.0},
                            Vector{0.0, 0.0, 0.0});
  for (int i = 0; i < 500; ++i) {
    Vector x = qmdtest::random_feasible(rng, box.set());
    Vector u = qmdtest::random_feasible(rng, box.set());
    Vector p = qmdtest::random_vector(rng, 3, -3.0, 3.0);
    double h = qmdtest::uniform(rng, 0.01, 2.0);
    Vector z = box.mirror_step(x, p, h);
    double pn = dual_norm(p, box.norm());
    double lhs = h * dot(p, x - u);
    double rhs = 0.5 * h * h * pn * pn + box.bregman(x, u) - box.bregman(z, u);
    CHECK(lhs <= rhs + 1e-7);
  }
}

TEST_CASE("closed form matches brute-force minimization") {
  qmdtest::Rng rng(37);
  for (int i = 0; i < 25; ++i) {
    std::size_t d = 1 + i % 3;
    Vector lo = qmdtest::random_vector(rng, d, -2.0, -0.5);
    Vector hi = qmdtest::random_vector(rng, d, 0.5, 2.0);
    ProxSetup box = ProxSetup::euclidean_on_box(FeasibleSet::box(lo, hi), Vector::zeros(d));
    ProxSetup ball = ProxSetup::euclidean_on_ball(
        FeasibleSet::ball(qmdtest::random_vector(rng, d, -0.5, 0.5),
                          qmdtest::uniform(rng, 0.5, 2.0)));
    ProxSetup entropy = ProxSetup::entropy_on_simplex(d == 1 ? 2 : d);
    for (const ProxSetup& prox : {box, ball, entropy}) {
      Vector x = prox.kind() == ProxKind::EntropyOnSimplex
                     ? qmdtest::random_simplex_interior(rng, prox.dim())
                     : qmdtest::random_feasible(rng, prox.set());
      Vector p = qmdtest::random_vector(rng, prox.dim(), -2.0, 2.0);
      double h = qmdtest::uniform(rng, 0.05, 1.5);
      Vector closed = prox.mirror_step(x, p, h);
      Vector brute = qmdtest::brute_force_mirror_step(prox, x, p, h);
      CHECK(norm(closed - brute, NormKind::LInf) <= 1e-6);
    }
  }
}

TEST_CASE("start point minimizes the prox function") {
  qmdtest::Rng rng(97);
  ProxSetup box = box_setup(Vector{0.25, -1.0}, Vector{2.0, 1.0}, Vector{0.0, 0.0});
  ProxSetup ball = ProxSetup::euclidean_on_ball(FeasibleSet::ball(Vector{1.5, 0.0}, 1.0));
  ProxSetup entropy = ProxSetup::entropy_on_simplex(3);
  for (const ProxSetup& prox : {box, ball, entropy}) {
    Vector x0 = prox.start_point();
    CHECK(prox.set().contains(x0));
    double d0 = prox.prox_value(x0);
    for (int i = 0; i < 200; ++i) {
      Vector u = qmdtest::random_feasible(rng, prox.set());
      CHECK(d0 <= prox.prox_value(u) + 1e-12);
    }
  }
}

TEST_CASE("theta bound audit") {
  ProxSetup box = box_setup(Vector{-1.0}, Vector{1.0}, Vector{-1.0});
  CHECK(theta_bound_holds(box, Vector{0.0}, std::sqrt(0.5)));
  CHECK_FALSE(theta_bound_holds(box, Vector{0.5}, 0.5));
}

#include "doctest.h"

#include <cmath>
#include <vector>

#include "hypembed/errors.hpp"
#include "hypembed/geometry.hpp"
#include "support/generators.hpp"

using namespace hypembed;

namespace {
using Vec = std::vector<double>;

// 2 artanh(r), evaluated at 50 digits.
constexpr double kDistHalf = 1.09861228866810969;
constexpr double kDistNineTenths = 2.94443897916644046;
}  // namespace

TEST_CASE("poincare_distance reference values") {
  const Vec o{0.0, 0.0};
  CHECK(poincare_distance(o, o) == 0.0);
  CHECK(poincare_distance(o, Vec{0.5, 0.0}) == doctest::Approx(kDistHalf).epsilon(1e-14));
  CHECK(poincare_distance(o, Vec{0.9, 0.0}) == doctest::Approx(kDistNineTenths).epsilon(1e-14));
  const Vec u{0.3, 0.1}, v{-0.2, 0.4};
  CHECK(poincare_distance(u, v) == poincare_distance(v, u));
}

TEST_CASE("poincare_distance rejects bad input") {
  CHECK_THROWS_AS(poincare_distance(Vec{1.0, 0.0}, Vec{0.0, 0.0}), GeometryError);
  CHECK_THROWS_AS(poincare_distance(Vec{0.1, 0.0}, Vec{0.0, 0.0, 0.0}), GeometryError);
}

TEST_CASE("poincare_distance keeps precision for close points") {
  // Both points sit on one ray, so the distance is 2 (artanh b - artanh a).
  const double a = 0.3, b = 0.3 + 1e-9;
  const double expected = 2.0 * (std::atanh(b) - std::atanh(a));
  CHECK(poincare_distance(Vec{a, 0.0}, Vec{b, 0.0}) ==
        doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("conformal_factor") {
  CHECK(conformal_factor(Vec{0.0, 0.0}) == 2.0);
  CHECK(conformal_factor(Vec{std::sqrt(0.5), 0.0}) == doctest::Approx(4.0));
  CHECK(conformal_factor(Vec{std::sqrt(0.99), 0.0}) == doctest::Approx(200.0));
  CHECK_THROWS_AS(conformal_factor(Vec{1.0, 0.0}), GeometryError);
}

TEST_CASE("project_to_ball") {
  CHECK(project_to_ball(Vec{0.2, 0.1}) == Vec{0.2, 0.1});
  CHECK(project_to_ball(Vec{0.0, 0.0}) == Vec{0.0, 0.0});
  const Vec p = project_to_ball(Vec{2.0, 0.0});
  CHECK(p[0] == doctest::Approx(0.99999).epsilon(1e-12));
  CHECK(p[1] == 0.0);
  CHECK(project_to_ball(p) == p);
  CHECK_THROWS_AS(project_to_ball(Vec{NAN, 0.0}), GeometryError);
}

TEST_CASE("BallMargin range") {
  CHECK(BallMargin{}.eps() == 1e-5);
  CHECK_THROWS_AS(BallMargin(0.0), ConfigError);
  CHECK_THROWS_AS(BallMargin(0.5), ConfigError);
  CHECK(BallMargin(0.1).max_norm() == doctest::Approx(0.9));
}

TEST_CASE("PoincarePoint clamps on construction") {
  const PoincarePoint p(Vec{3.0, 4.0});
  CHECK(std::sqrt(squared_norm(p.coords())) <= BallMargin{}.max_norm());
}

TEST_CASE("mobius_add identities") {
  const Vec o{0.0, 0.0}, u{0.3, -0.4}, v{-0.1, 0.7};
  const Vec a = mobius_add(o, v);
  CHECK(a[0] == doctest::Approx(v[0]));
  CHECK(a[1] == doctest::Approx(v[1]));
  const Vec b = mobius_add(u, o);
  CHECK(b[0] == doctest::Approx(u[0]));
  CHECK(b[1] == doctest::Approx(u[1]));
  const Vec c = mobius_add(u, Vec{-u[0], -u[1]});
  CHECK(std::abs(c[0]) < 1e-15);
  CHECK(std::abs(c[1]) < 1e-15);
}

TEST_CASE("distance_gradient degenerate pair") {
  const Vec u{0.2, 0.2};
  CHECK_FALSE(distance_gradient(u, u).has_value());
}

TEST_CASE("property: metric axioms") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    testing::Gen g(seed);
    const std::size_t dim = 1 + g.index(5);
    const Vec a = g.ball_point(dim), b = g.ball_point(dim), c = g.ball_point(dim);
    CAPTURE(seed);
    const double ab = poincare_distance(a, b);
    CHECK(ab >= 0.0);
    CHECK(poincare_distance(a, a) == 0.0);
    CHECK(ab == poincare_distance(b, a));
    CHECK(poincare_distance(a, c) <= ab + poincare_distance(b, c) + 1e-12);
  }
}

TEST_CASE("property: rotation invariance") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testing::Gen g(seed);
    const Vec a = g.ball_point(2), b = g.ball_point(2);
    const double t = g.uniform(0.0, 6.283185307179586);
    auto rot = [&](const Vec& x) {
      return Vec{std::cos(t) * x[0] - std::sin(t) * x[1], std::sin(t) * x[0] + std::cos(t) * x[1]};
    };
    CAPTURE(seed);
    CHECK(poincare_distance(rot(a), rot(b)) ==
          doctest::Approx(poincare_distance(a, b)).epsilon(1e-10));
  }
}

TEST_CASE("property: mobius translation is an isometry") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testing::Gen g(seed);
    const std::size_t dim = 2 + g.index(3);
    const Vec a = g.ball_point(dim, 0.7), u = g.ball_point(dim, 0.7), v = g.ball_point(dim, 0.7);
    CAPTURE(seed);
    CHECK(poincare_distance(mobius_add(a, u), mobius_add(a, v)) ==
          doctest::Approx(poincare_distance(u, v)).epsilon(1e-8));
  }
}

TEST_CASE("property: origin distance is 2 artanh |x|") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testing::Gen g(seed);
    const Vec x = g.ball_point(3, 0.99);
    const Vec o(3, 0.0);
    CHECK(poincare_distance(o, x) ==
          doctest::Approx(2.0 * std::atanh(std::sqrt(squared_norm(x)))).epsilon(1e-10));
  }
}

TEST_CASE("property: distance_gradient matches finite differences") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testing::Gen g(seed);
    const std::size_t dim = 1 + g.index(4);
    Vec u = g.ball_point(dim, 0.9);
    const Vec v = g.ball_point(dim, 0.9);
    const auto grad = distance_gradient(u, v);
    REQUIRE(grad.has_value());
    const double h = 1e-7;
    for (std::size_t k = 0; k < dim; ++k) {
      const double orig = u[k];
      u[k] = orig + h;
      const double up = poincare_distance(u, v);
      u[k] = orig - h;
      const double down = poincare_distance(u, v);
      u[k] = orig;
      CAPTURE(seed);
      CHECK((*grad)[k] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("property: projection is idempotent and inside the ball") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    testing::Gen g(seed);
    Vec x(3);
    for (double& c : x) c = g.normal() * 3.0;
    const Vec p = project_to_ball(x);
    CHECK(std::sqrt(squared_norm(p)) <= BallMargin{}.max_norm());
    CHECK(project_to_ball(p) == p);
  }
}

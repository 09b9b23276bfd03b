#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "hypembed/distributions.hpp"
#include "hypembed/errors.hpp"
#include "support/radial_oracle.hpp"

using namespace hypembed;

namespace {
using Vec = std::vector<double>;

std::vector<double> origin_radii(const Matrix& samples) {
  std::vector<double> r(samples.rows());
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    r[i] = 2.0 * std::atanh(std::sqrt(squared_norm(samples.row(i))));
  }
  return r;
}
}  // namespace

TEST_CASE("riemannian_normal_log_unnorm") {
  const RiemannianNormalParams origin{PoincarePoint(Vec{0.0, 0.0}), 1.0};
  // -(2 artanh 0.5)^2 / 2 at 50 digits.
  CHECK(riemannian_normal_log_unnorm(Vec{0.5, 0.0}, origin) ==
        doctest::Approx(-0.603474480406290989).epsilon(1e-14));
  const RiemannianNormalParams shifted{PoincarePoint(Vec{0.3, -0.2}), 0.7};
  CHECK(riemannian_normal_log_unnorm(Vec{0.3, -0.2}, shifted) == 0.0);
  CHECK_THROWS_AS((RiemannianNormalParams{PoincarePoint(Vec{0.0}), 0.0}.validate()), ConfigError);
}

TEST_CASE("cauchy_kernel values") {
  CHECK(cauchy_kernel(0.0, {0.1}) == 1.0);
  CHECK(cauchy_kernel(0.0, {3.0}) == 1.0);
  CHECK(cauchy_kernel(1.0, {1.0}) == 0.5);
  CHECK(cauchy_kernel(1.0, {0.1}) == doctest::Approx(0.00990099009900990).epsilon(1e-14));
  CHECK_THROWS(cauchy_kernel(-1.0, {1.0}));
  CHECK_THROWS_AS(cauchy_kernel(1.0, {0.0}), ConfigError);
}

TEST_CASE("cauchy_kernel monotonicity and tail contrast") {
  for (double d = 0.0; d < 10.0; d += 0.25) {
    CHECK(cauchy_kernel(d + 0.25, {0.1}) < cauchy_kernel(d, {0.1}));
    if (d > 0.0) CHECK(cauchy_kernel(d, {0.2}) > cauchy_kernel(d, {0.1}));
  }
  CHECK(cauchy_kernel(5.0, {0.1}) / cauchy_kernel(0.0, {0.1}) <
        cauchy_kernel(5.0, {1.0}) / cauchy_kernel(0.0, {1.0}));
}

TEST_CASE("RadialInverseCdf is monotone and spans [0, r_max]") {
  const RadialInverseCdf inv(5, 1.0);
  CHECK(inv(0.0) == 0.0);
  CHECK(inv(1.0) == doctest::Approx(inv.r_max()));
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double r = inv(i / 1000.0);
    CHECK(r >= prev);
    prev = r;
  }
  CHECK(inv.cdf(inv(0.3)) == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("sampler: inside ball, deterministic, mean radius") {
  const RiemannianNormalParams params{PoincarePoint(Vec(5, 0.0)), 1.0};
  const Matrix a = sample_riemannian_normal(params, 10000, 42);
  const Matrix b = sample_riemannian_normal(params, 10000, 42);
  CHECK(a == b);
  for (std::size_t i = 0; i < a.rows(); ++i) REQUIRE(squared_norm(a.row(i)) < 1.0);

  const std::vector<double> r = origin_radii(a);
  double mean = 0.0;
  for (double v : r) mean += v;
  mean /= static_cast<double>(r.size());
  // Frozen at 50 digits: int r rho(r) dr / int rho(r) dr for n = 5, sigma = 1.
  constexpr double kMeanRadius = 4.01660126131141797;
  CHECK(testing::RadialOracle(5, 1.0).mean() == doctest::Approx(kMeanRadius).epsilon(1e-10));
  CHECK(std::abs(mean - kMeanRadius) / kMeanRadius < 0.02);

  CHECK_THROWS_AS(sample_riemannian_normal(params, 0, 1), ConfigError);
}

TEST_CASE("sampler: different seeds and streams differ") {
  const RiemannianNormalParams params{PoincarePoint(Vec(3, 0.0)), 0.5};
  const Matrix a = sample_riemannian_normal(params, 50, 1, 0);
  CHECK_FALSE(a == sample_riemannian_normal(params, 50, 2, 0));
  CHECK_FALSE(a == sample_riemannian_normal(params, 50, 1, 1));
  // Prefix stability: sample k depends only on (seed, stream, k).
  const Matrix longer = sample_riemannian_normal(params, 80, 1, 0);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(std::equal(a.row(i).begin(), a.row(i).end(), longer.row(i).begin()));
  }
}

TEST_CASE("sampler: translated samples centre on the mean") {
  const PoincarePoint mu(Vec{0.5, 0.0, 0.0});
  const RiemannianNormalParams params{mu, 0.3};
  const Matrix s = sample_riemannian_normal(params, 4000, 9);
  // Pull the samples back to the origin; the result is the centred law.
  const Vec neg{-0.5, 0.0, 0.0};
  double mean_radius = 0.0;
  Vec centroid(3, 0.0);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const Vec back = mobius_add(neg, s.row(i));
    mean_radius += 2.0 * std::atanh(std::sqrt(squared_norm(back)));
    for (std::size_t k = 0; k < 3; ++k) centroid[k] += back[k];
  }
  mean_radius /= static_cast<double>(s.rows());
  const double expected = testing::RadialOracle(3, 0.3).mean();
  CHECK(std::abs(mean_radius - expected) / expected < 0.03);
  for (double c : centroid) CHECK(std::abs(c / static_cast<double>(s.rows())) < 0.02);
}

TEST_CASE("property: sampler radial law across dimensions (chi-square, KS)") {
  // Radii beyond about 10 cannot be represented inside the ball margin, so the
  // cases keep the radial mass well below that.
  const std::vector<std::pair<std::size_t, double>> cases{
      {1, 0.3}, {1, 1.5}, {2, 0.3}, {2, 1.0}, {5, 0.5}, {5, 1.0}, {10, 0.3}, {10, 0.6}};
  for (const auto& [dim, sigma] : cases) {
    CAPTURE(dim);
    CAPTURE(sigma);
    const RiemannianNormalParams params{PoincarePoint(Vec(dim, 0.0)), sigma};
    std::vector<double> r = origin_radii(sample_riemannian_normal(params, 20000, dim * 31 + 7));
    const testing::RadialOracle oracle(dim, sigma);
    CHECK(testing::radial_chi_square(r, oracle, 40).p_value > 1e-3);

    std::sort(r.begin(), r.end());
    double ks = 0.0;
    const double n = static_cast<double>(r.size());
    for (std::size_t i = 0; i < r.size(); i += 97) {
      const double f = oracle.probability(0.0, r[i]);
      ks = std::max({ks, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
    }
    // Kolmogorov critical value at alpha = 0.001 is about 1.95 / sqrt(n).
    CHECK(ks < 1.95 / std::sqrt(n));
  }
}

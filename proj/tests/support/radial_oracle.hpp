#pragma once
// Independent reference for the radial law of an origin-centred Riemannian
// normal: density proportional to exp(-r^2 / 2 sigma^2) sinh^(n-1)(r),
// integrated with adaptive Gauss-Kronrod rather than the sampler's table.
#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hypembed/matrix.hpp"

namespace testing {

class RadialOracle {
 public:
  RadialOracle(std::size_t dim, double sigma) : dim_(dim), sigma_(sigma) {
    upper_ = 12.0 * sigma + static_cast<double>(dim);
    norm_ = integrate(0.0, upper_);
  }

  double density(double r) const {
    if (r <= 0.0) return dim_ == 1 ? 1.0 : 0.0;
    const double n1 = static_cast<double>(dim_ - 1);
    return std::exp(-r * r / (2.0 * sigma_ * sigma_) + n1 * std::log(std::sinh(r)));
  }

  double probability(double a, double b) const { return integrate(a, b) / norm_; }

  double mean() const {
    auto f = [this](double r) { return r * density(r); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, upper_, 15,
                                                                         1e-13) /
           norm_;
  }

  double upper() const { return upper_; }

 private:
  double integrate(double a, double b) const {
    auto f = [this](double r) { return density(r); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
  }

  std::size_t dim_;
  double sigma_;
  double upper_;
  double norm_;
};

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 0.0;
  int dof = 0;
};

// Equal-probability bins under the oracle, chi-square goodness of fit.
inline ChiSquareResult radial_chi_square(const std::vector<double>& radii, const RadialOracle& o,
                                         std::size_t bins) {
  std::vector<double> edges{0.0};
  // Locate equal-mass quantiles by bisection on the oracle CDF.
  double lo_prev = 0.0;
  for (std::size_t b = 1; b < bins; ++b) {
    const double target = static_cast<double>(b) / static_cast<double>(bins);
    double lo = lo_prev, hi = o.upper();
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (o.probability(0.0, mid) < target ? lo : hi) = mid;
    }
    edges.push_back(0.5 * (lo + hi));
    lo_prev = edges.back();
  }
  edges.push_back(INFINITY);

  std::vector<double> counts(bins, 0.0);
  for (double r : radii) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), r);
    const std::size_t idx = std::min<std::size_t>(bins - 1, static_cast<std::size_t>(it - edges.begin()) - 1);
    counts[idx] += 1.0;
  }
  ChiSquareResult out;
  const double expected = static_cast<double>(radii.size()) / static_cast<double>(bins);
  for (double c : counts) out.statistic += (c - expected) * (c - expected) / expected;
  out.dof = static_cast<int>(bins) - 1;
  boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

}  // namespace testing

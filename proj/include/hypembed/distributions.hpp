#pragma once

// Hyperbolic probability kernels and an exact sampler for isotropic
// Riemannian normal distributions on the Poincare ball.

#include <cstdint>
#include <span>
#include <vector>

#include "hypembed/geometry.hpp"
#include "hypembed/matrix.hpp"

namespace hypembed {

/// Riemannian normal N(mean, sigma^2): density proportional to
/// exp(-d(mean, x)^2 / (2 sigma^2)).
struct RiemannianNormalParams {
  PoincarePoint mean;
  double sigma = 1.0;

  void validate() const;
};

/// Hyperbolic Cauchy kernel with scale gamma. gamma = 1 is the hyperbolic
/// Student-t with one degree of freedom.
struct CauchyKernelParams {
  double gamma_scale = 0.1;

  void validate() const;
};

/// -d(mean, x)^2 / (2 sigma^2). The normalizing constant is never needed.
double riemannian_normal_log_unnorm(std::span<const double> x,
                                    const RiemannianNormalParams& params);

/// gamma^2 / (d^2 + gamma^2), without the 1/(pi gamma) prefactor.
double cauchy_kernel(double d, CauchyKernelParams params);

/// Tabulated inverse CDF of the hyperbolic radius of an isotropic Riemannian
/// normal in dimension n: density proportional to
/// exp(-r^2 / (2 sigma^2)) sinh^(n-1)(r) on [0, r_max].
class RadialInverseCdf {
 public:
  static constexpr std::size_t kGridPoints = 4096;

  RadialInverseCdf(std::size_t dim, double sigma);

  /// Log of the unnormalized radial density.
  double log_density(double r) const noexcept;
  double r_max() const noexcept { return radii_.back(); }
  /// Maps u in [0, 1] to a radius by monotone linear interpolation.
  double operator()(double u) const noexcept;
  /// Tabulated CDF evaluated at r (linear interpolation).
  double cdf(double r) const noexcept;

 private:
  std::size_t dim_;
  double sigma_;
  std::vector<double> radii_;
  std::vector<double> cdf_;
};

/// Draws count i.i.d. points from the isotropic Riemannian normal, one per row.
/// The radius comes from the tabulated inverse CDF, the direction is uniform on
/// the sphere, and the origin-centred sample is transported by mean (+) x.
/// Sample k depends only on (seed, stream, k).
Matrix sample_riemannian_normal(const RiemannianNormalParams& params, std::size_t count,
                                std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace hypembed

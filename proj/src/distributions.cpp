#include "hypembed/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hypembed/errors.hpp"
#include "hypembed/random.hpp"

namespace hypembed {

void RiemannianNormalParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("Riemannian normal sigma must be positive, got " + std::to_string(sigma));
  }
  if (mean.dim() == 0) throw ConfigError("Riemannian normal mean has dimension 0");
}

void CauchyKernelParams::validate() const {
  if (!(gamma_scale > 0.0) || !std::isfinite(gamma_scale)) {
    throw ConfigError("Cauchy scale gamma must be positive, got " + std::to_string(gamma_scale));
  }
}

double riemannian_normal_log_unnorm(std::span<const double> x,
                                    const RiemannianNormalParams& params) {
  params.validate();
  const double d = poincare_distance(params.mean.coords(), x);
  return -(d * d) / (2.0 * params.sigma * params.sigma);
}

double cauchy_kernel(double d, CauchyKernelParams params) {
  params.validate();
  if (!(d >= 0.0)) throw GeometryError("Cauchy kernel needs a non-negative distance");
  const double g2 = params.gamma_scale * params.gamma_scale;
  return g2 / (d * d + g2);
}

RadialInverseCdf::RadialInverseCdf(std::size_t dim, double sigma)
    : dim_(dim), sigma_(sigma), radii_(kGridPoints), cdf_(kGridPoints, 0.0) {
  if (dim == 0) throw ConfigError("radial distribution needs dimension >= 1");
  if (!(sigma > 0.0)) throw ConfigError("radial distribution needs sigma > 0");

  // The mode sits near sigma sqrt(n-1) for small sigma and near sigma^2 (n-1)
  // for large sigma; past it the density decays at least like a Gaussian of
  // width sigma, so sqrt(80) sigma beyond both leaves a tail below e^-40.
  const double n1 = static_cast<double>(dim - 1);
  const double r_max = sigma * sigma * n1 + sigma * (std::sqrt(n1) + std::sqrt(80.0));
  const double h = r_max / static_cast<double>(kGridPoints - 1);
  std::vector<double> logp(kGridPoints);
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    radii_[i] = h * static_cast<double>(i);
    logp[i] = log_density(radii_[i]);
  }
  const double peak = *std::max_element(logp.begin(), logp.end());
  // Trapezoid rule on the peak-shifted density.
  double prev = std::exp(logp[0] - peak);
  for (std::size_t i = 1; i < kGridPoints; ++i) {
    const double cur = std::exp(logp[i] - peak);
    cdf_[i] = cdf_[i - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  const double total = cdf_.back();
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

double RadialInverseCdf::log_density(double r) const noexcept {
  const double gauss = -(r * r) / (2.0 * sigma_ * sigma_);
  if (dim_ == 1) return gauss;
  if (r <= 0.0) return -HUGE_VAL;
  // log sinh r = r + log1p(-exp(-2r)) - log 2, stable for large r.
  const double log_sinh = r + std::log1p(-std::exp(-2.0 * r)) - std::log(2.0);
  return gauss + static_cast<double>(dim_ - 1) * log_sinh;
}

double RadialInverseCdf::operator()(double u) const noexcept {
  u = std::clamp(u, 0.0, 1.0);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return radii_.back();
  const std::size_t hi = static_cast<std::size_t>(it - cdf_.begin());
  const std::size_t lo = hi - 1;
  const double span = cdf_[hi] - cdf_[lo];
  const double t = span > 0.0 ? (u - cdf_[lo]) / span : 0.0;
  return radii_[lo] + t * (radii_[hi] - radii_[lo]);
}

double RadialInverseCdf::cdf(double r) const noexcept {
  if (r <= 0.0) return 0.0;
  if (r >= radii_.back()) return 1.0;
  const double h = radii_[1];
  const auto lo = static_cast<std::size_t>(r / h);
  const double t = (r - radii_[lo]) / h;
  return cdf_[lo] + t * (cdf_[lo + 1] - cdf_[lo]);
}

Matrix sample_riemannian_normal(const RiemannianNormalParams& params, std::size_t count,
                                std::uint64_t seed, std::uint64_t stream) {
  params.validate();
  if (count == 0) throw ConfigError("sample count must be positive");

  const std::size_t n = params.mean.dim();
  const RadialInverseCdf radius(n, params.sigma);
  const CounterRng rng = CounterRng(seed).split(stream);
  const std::span<const double> mean = params.mean.coords();
  const bool at_origin = squared_norm(mean) == 0.0;
  // Per-sample counter budget: one uniform for the radius, n normals (two
  // uniforms each) for the direction.
  const std::uint64_t stride = 2 * n + 2;

  Matrix out(count, n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(count); ++s) {
    const std::uint64_t base = static_cast<std::uint64_t>(s) * stride;
    std::span<double> x = out.row(static_cast<std::size_t>(s));
    double dir_sq = 0.0;
    std::uint64_t attempt = 0;
    do {
      dir_sq = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        // Normals use counter pairs (2c, 2c+1); offset past the radius draw.
        x[k] = rng.split(attempt).normal(base / 2 + 1 + k);
        dir_sq += x[k] * x[k];
      }
      ++attempt;
    } while (dir_sq == 0.0);
    const double r = radius(rng.uniform(base));
    // Hyperbolic radius r from the origin sits at Euclidean norm tanh(r/2).
    const double scale = std::tanh(0.5 * r) / std::sqrt(dir_sq);
    for (double& c : x) c *= scale;
    project_to_ball_inplace(x);
    if (!at_origin) {
      const std::vector<double> moved = mobius_add(mean, x);
      std::copy(moved.begin(), moved.end(), x.begin());
    }
  }
  return out;
}

}  // namespace hypembed

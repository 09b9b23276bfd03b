#include "hypembed/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hypembed/errors.hpp"

namespace hypembed {

namespace {

void require_same_dim(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw GeometryError("dimension mismatch: " + std::to_string(u.size()) + " vs " +
                        std::to_string(v.size()));
  }
}

double require_inside(std::span<const double> x) {
  const double sq = squared_norm(x);
  if (!(sq < 1.0)) {
    throw GeometryError("point not strictly inside the unit ball (|x|^2 = " +
                        std::to_string(sq) + ")");
  }
  return sq;
}

}  // namespace

BallMargin::BallMargin(double eps) : eps_(eps) {
  if (!(eps > 0.0 && eps <= 0.1)) {
    throw ConfigError("ball margin must lie in (0, 0.1], got " + std::to_string(eps));
  }
}

PoincarePoint::PoincarePoint(std::vector<double> coords, BallMargin margin)
    : coords_(std::move(coords)) {
  project_to_ball_inplace(coords_, margin);
}

double squared_norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double c : x) s += c * c;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double poincare_distance(std::span<const double> u, std::span<const double> v) {
  require_same_dim(u, v);
  const double u_sq = require_inside(u);
  const double v_sq = require_inside(v);
  return unchecked::hyperbolic_distance(u, v, u_sq, v_sq);
}

double poincare_distance(const PoincarePoint& u, const PoincarePoint& v) {
  return poincare_distance(u.coords(), v.coords());
}

double conformal_factor(std::span<const double> x) {
  return 2.0 / (1.0 - require_inside(x));
}

double conformal_factor(const PoincarePoint& x) { return conformal_factor(x.coords()); }

void project_to_ball_inplace(std::span<double> x, BallMargin margin) {
  for (double c : x) {
    if (!std::isfinite(c)) throw GeometryError("cannot project non-finite coordinates");
  }
  const double limit = margin.max_norm();
  const double limit_sq = limit * limit;
  double sq = squared_norm(x);
  if (sq <= limit_sq) return;
  const double scale = limit / std::sqrt(sq);
  for (double& c : x) c *= scale;
  // Rounding can leave the rescaled norm an ulp above the limit.
  while (squared_norm(x) > limit_sq) {
    for (double& c : x) c *= 1.0 - std::numeric_limits<double>::epsilon();
  }
}

std::vector<double> project_to_ball(std::span<const double> x, BallMargin margin) {
  std::vector<double> out(x.begin(), x.end());
  project_to_ball_inplace(out, margin);
  return out;
}

std::vector<double> mobius_add(std::span<const double> u, std::span<const double> v,
                               BallMargin margin) {
  require_same_dim(u, v);
  const double u_sq = require_inside(u);
  const double v_sq = require_inside(v);
  const double uv = dot(u, v);
  const double a = 1.0 + 2.0 * uv + v_sq;
  const double b = 1.0 - u_sq;
  const double denom = 1.0 + 2.0 * uv + u_sq * v_sq;
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = (a * u[i] + b * v[i]) / denom;
  project_to_ball_inplace(out, margin);
  return out;
}

PoincarePoint mobius_add(const PoincarePoint& u, const PoincarePoint& v) {
  return PoincarePoint(mobius_add(u.coords(), v.coords()));
}

std::optional<std::vector<double>> distance_gradient(std::span<const double> u,
                                                     std::span<const double> v) {
  require_same_dim(u, v);
  const double u_sq = require_inside(u);
  const double v_sq = require_inside(v);
  std::vector<double> out(u.size());
  if (!unchecked::distance_gradient(u, v, u_sq, v_sq, out)) return std::nullopt;
  return out;
}

namespace unchecked {

bool distance_gradient(std::span<const double> u, std::span<const double> v, double u_sq,
                       double v_sq, std::span<double> out) noexcept {
  const double diff_sq = squared_distance(u, v);
  if (diff_sq == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return false;
  }
  const double alpha = 1.0 - u_sq;
  const double beta = 1.0 - v_sq;
  // With g = 1 + 2|u-v|^2/(alpha beta):  g^2 - 1 = (g - 1)(g + 1), which avoids
  // cancellation for close pairs.
  const double g_minus_1 = 2.0 * diff_sq / (alpha * beta);
  const double root = std::sqrt(g_minus_1 * (g_minus_1 + 2.0));
  const double lead = 4.0 / (beta * root);
  const double u_coef = (v_sq - 2.0 * dot(u, v) + 1.0) / (alpha * alpha);
  for (std::size_t k = 0; k < u.size(); ++k) {
    out[k] = lead * (u_coef * u[k] - v[k] / alpha);
  }
  return true;
}

}  // namespace unchecked

}  // namespace hypembed

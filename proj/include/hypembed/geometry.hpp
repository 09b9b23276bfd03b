#pragma once

// Poincare-ball primitives for the unit ball (curvature -1).

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace hypembed {

enum class Metric { hyperbolic, euclidean };

/// Distance kept between projected points and the unit sphere.
class BallMargin {
 public:
  static constexpr double kDefault = 1e-5;

  constexpr BallMargin() = default;
  explicit BallMargin(double eps);

  constexpr double eps() const noexcept { return eps_; }
  /// Largest admissible Euclidean norm, 1 - eps.
  constexpr double max_norm() const noexcept { return 1.0 - eps_; }

 private:
  double eps_ = kDefault;
};

/// A point strictly inside the unit ball. Construction clamps into the ball.
class PoincarePoint {
 public:
  PoincarePoint() = default;
  explicit PoincarePoint(std::vector<double> coords, BallMargin margin = {});

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }

  friend bool operator==(const PoincarePoint&, const PoincarePoint&) = default;

 private:
  std::vector<double> coords_;
};

double squared_norm(std::span<const double> x) noexcept;
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// Hyperbolic distance arcosh(1 + 2|u-v|^2 / ((1-|u|^2)(1-|v|^2))).
/// Throws GeometryError on dimension mismatch or a point with norm >= 1.
double poincare_distance(std::span<const double> u, std::span<const double> v);
double poincare_distance(const PoincarePoint& u, const PoincarePoint& v);

/// 2 / (1 - |x|^2).
double conformal_factor(std::span<const double> x);
double conformal_factor(const PoincarePoint& x);

/// Rescales x onto the sphere of radius 1 - eps when it lies outside it.
/// The result always satisfies squared_norm <= (1-eps)^2 as computed here,
/// so projecting twice is a no-op.
std::vector<double> project_to_ball(std::span<const double> x, BallMargin margin = {});
void project_to_ball_inplace(std::span<double> x, BallMargin margin = {});

/// Mobius addition u (+) v.
PoincarePoint mobius_add(const PoincarePoint& u, const PoincarePoint& v);
std::vector<double> mobius_add(std::span<const double> u, std::span<const double> v,
                               BallMargin margin = {});

/// Gradient of poincare_distance(u, v) with respect to u. Returns nullopt for
/// the degenerate pair u == v, where the gradient is undefined.
std::optional<std::vector<double>> distance_gradient(std::span<const double> u,
                                                     std::span<const double> v);

namespace unchecked {

// Hot-loop variants: inputs are assumed validated (same dim, inside ball).

inline double hyperbolic_distance(std::span<const double> u, std::span<const double> v,
                                  double u_sq, double v_sq) noexcept {
  const double t = squared_distance(u, v) / ((1.0 - u_sq) * (1.0 - v_sq));
  // arcosh(1 + 2t) == 2 asinh(sqrt(t)); the latter keeps precision near 0.
  return 2.0 * std::asinh(std::sqrt(t));
}

/// Writes d/du distance(u, v) into out. Returns false (out zeroed) when u == v.
bool distance_gradient(std::span<const double> u, std::span<const double> v, double u_sq,
                       double v_sq, std::span<double> out) noexcept;

}  // namespace unchecked

}  // namespace hypembed

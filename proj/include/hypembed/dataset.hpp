#pragma once

#include <span>
#include <string>
#include <vector>

#include "hypembed/geometry.hpp"
#include "hypembed/matrix.hpp"

namespace hypembed {

/// Ordered point set (one point per row) with optional per-point labels.
struct Dataset {
  Matrix points;
  std::vector<std::string> labels;  ///< empty when unlabeled
  std::string name;

  std::size_t size() const noexcept { return points.rows(); }
  std::size_t dim() const noexcept { return points.cols(); }
  bool has_labels() const noexcept { return !labels.empty(); }
  std::span<const double> point(std::size_t i) const noexcept { return points.row(i); }

  /// Throws DataError when labels do not match the point count or a
  /// coordinate is non-finite.
  void validate() const;
  /// Additionally throws GeometryError when a point is not strictly inside the ball.
  void validate_in_ball() const;
};

/// Squared Euclidean norm of every row.
std::vector<double> row_squared_norms(const Matrix& points);

}  // namespace hypembed

#pragma once

// Embedding quality measures and isolated-pair gradient fields.

#include <span>
#include <string>
#include <vector>

#include "hypembed/dataset.hpp"
#include "hypembed/geometry.hpp"
#include "hypembed/matrix.hpp"
#include "hypembed/optimizer.hpp"

namespace hypembed {

inline constexpr std::size_t kDefaultNeighbors = 5;

struct QualityReport {
  double knn_preservation = 0.0;
  double norm_rmse = 0.0;
  double purity_at_k = 0.0;
  double final_kl = 0.0;
  double final_dist_loss = 0.0;
};

/// Indices of the k nearest neighbors of every point (excluding itself),
/// ordered by distance with ties broken by ascending index.
std::vector<std::vector<std::size_t>> nearest_neighbors(const Matrix& points, std::size_t k,
                                                        Metric metric);

/// Mean over points of |kNN_hi(i) intersect kNN_lo(i)| / k.
double knn_preservation(const Matrix& x, const Matrix& y, std::size_t k, Metric metric_hi,
                        Metric metric_lo);

/// sqrt of the mean squared difference of squared norms.
double norm_rmse(const Matrix& x, const Matrix& y);

/// Mean fraction of each point's k nearest neighbors sharing its label.
double purity_at_k(const Dataset& y, std::size_t k, Metric metric);

/// Computes all report fields. x and y must be in correspondence; purity is
/// 0 when y carries no labels.
QualityReport quality_report(const Dataset& x, const Dataset& y, const EmbedConfig& config,
                             std::size_t k = kDefaultNeighbors);

/// "key value" lines, one per field.
std::string to_key_value(const QualityReport& report);
std::string to_json(const QualityReport& report);

/// Grid of gradient_force values. Row r holds lo = lo_range[0] + r * step_lo
/// (y-axis); column c holds hi = hi_range[0] + c * step_hi (x-axis).
struct FieldRange {
  double min = 0.05;
  double max = 5.0;
};

Matrix gradient_field_grid(Mode mode, const ForceFieldParams& params, FieldRange hi_range,
                           FieldRange lo_range, std::size_t resolution);

/// Coordinate of grid index idx along a range.
double field_coordinate(FieldRange range, std::size_t idx, std::size_t resolution) noexcept;

}  // namespace hypembed

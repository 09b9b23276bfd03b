#pragma once

// High-dimensional affinities P (perplexity-calibrated hyperbolic normals) and
// low-dimensional affinities Q (hyperbolic Cauchy kernel).

#include <span>
#include <vector>

#include "hypembed/dataset.hpp"
#include "hypembed/distributions.hpp"
#include "hypembed/geometry.hpp"
#include "hypembed/kernels.hpp"
#include "hypembed/matrix.hpp"

namespace hypembed {

enum class AffinityKind { conditional, joint };

/// Non-negative m x m matrix with zero diagonal. Conditional matrices have
/// unit row sums; joint matrices are symmetric with unit total.
class AffinityMatrix {
 public:
  static constexpr double kSumTolerance = 1e-9;

  /// Validates the invariants of kind; throws DataError on violation.
  AffinityMatrix(Matrix entries, AffinityKind kind);

  const Matrix& entries() const noexcept { return entries_; }
  AffinityKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return entries_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }

 private:
  Matrix entries_;
  AffinityKind kind_;
};

struct PerplexityTarget {
  double value = 30.0;
  double tol = 1e-5;
  int max_iter = 200;

  /// Requires 1 < value < m, tol > 0, max_iter > 0.
  void validate(std::size_t m) const;
};

/// Default perplexity clamped to (m - 1) / 3 for small m.
double effective_perplexity(double requested, std::size_t m);

struct SigmaCalibration {
  double sigma = 1.0;
  double perplexity = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Symmetric m x m distance matrix (zero diagonal). Hyperbolic mode requires
/// every point strictly inside the ball.
Matrix pairwise_distances(const Matrix& points, Metric metric, Exec exec = Exec::parallel);

/// p_{j|i} proportional to exp(-d_ij^2 / (2 sigma^2)) over j != i, with p_{i|i} = 0.
std::vector<double> conditional_row(std::span<const double> dist_row, std::size_t i,
                                    double sigma);

/// 2^H for the Shannon entropy H (bits) of a probability row.
double row_perplexity(std::span<const double> p_row);

/// Bisection on log sigma in [1e-10, 1e10] until the row perplexity is within
/// target.tol of target.value. An unreachable target returns the best sigma
/// found with converged = false.
SigmaCalibration calibrate_sigma(std::span<const double> dist_row, std::size_t i,
                                 const PerplexityTarget& target);

/// Calibrates every row of a distance matrix. Rows are independent.
AffinityMatrix conditional_affinities(const Matrix& dist, const PerplexityTarget& target,
                                      std::vector<SigmaCalibration>* calibration = nullptr);

/// p_ij = (p_{i|j} + p_{j|i}) / (2m).
AffinityMatrix symmetrize(const AffinityMatrix& conditional);

/// Distances, calibration and symmetrization in one call.
AffinityMatrix high_dim_affinities(const Matrix& points, Metric metric,
                                   const PerplexityTarget& target, Exec exec = Exec::parallel);

/// q_ij = k(d_ij) / sum_{k != l} k(d_kl) with k the Cauchy kernel.
AffinityMatrix low_dim_q(const Matrix& points, CauchyKernelParams params, Metric metric,
                         Exec exec = Exec::parallel);

}  // namespace hypembed

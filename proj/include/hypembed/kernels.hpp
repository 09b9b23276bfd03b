#pragma once

// O(m^2) inner loops of the embedding. Each kernel has a serial reference
// implementation and an OpenMP implementation. Both sum every row in
// ascending column order and combine row sums in ascending row order, so the
// two produce bit-identical results for any thread count.

#include "hypembed/geometry.hpp"
#include "hypembed/matrix.hpp"

namespace hypembed {

/// Selects the serial reference or the OpenMP implementation of a kernel.
enum class Exec { serial, parallel };

}  // namespace hypembed

namespace hypembed::kernels {

/// Unnormalized low-dimensional kernel values w_ij = gamma^2 / (d_ij^2 + gamma^2)
/// with zero diagonal, plus their sum over ordered pairs.
struct CauchyWeights {
  Matrix w;
  double total = 0.0;
};

namespace serial {
Matrix pairwise_distances(const Matrix& points, Metric metric);
CauchyWeights cauchy_weights(const Matrix& dist, double gamma);
/// dC/dY for C = KL(P || W/total), written into grad (m x dim).
void kl_gradient(const Matrix& p, const Matrix& y, const Matrix& dist, const CauchyWeights& w,
                 double gamma, Metric metric, Matrix& grad);
/// sum p_ij log(p_ij / q_ij) over p_ij > 0; q clamped below at 1e-12.
/// clamped counts the entries that needed clamping.
double kl_divergence(const Matrix& p, const Matrix& q_unnorm, double q_total,
                     std::size_t* clamped = nullptr);
}  // namespace serial

namespace omp {
Matrix pairwise_distances(const Matrix& points, Metric metric);
CauchyWeights cauchy_weights(const Matrix& dist, double gamma);
void kl_gradient(const Matrix& p, const Matrix& y, const Matrix& dist, const CauchyWeights& w,
                 double gamma, Metric metric, Matrix& grad);
double kl_divergence(const Matrix& p, const Matrix& q_unnorm, double q_total,
                     std::size_t* clamped = nullptr);
}  // namespace omp

inline Matrix pairwise_distances(const Matrix& points, Metric metric, Exec exec) {
  return exec == Exec::serial ? serial::pairwise_distances(points, metric)
                              : omp::pairwise_distances(points, metric);
}

inline CauchyWeights cauchy_weights(const Matrix& dist, double gamma, Exec exec) {
  return exec == Exec::serial ? serial::cauchy_weights(dist, gamma)
                              : omp::cauchy_weights(dist, gamma);
}

inline void kl_gradient(const Matrix& p, const Matrix& y, const Matrix& dist,
                        const CauchyWeights& w, double gamma, Metric metric, Matrix& grad,
                        Exec exec) {
  if (exec == Exec::serial) {
    serial::kl_gradient(p, y, dist, w, gamma, metric, grad);
  } else {
    omp::kl_gradient(p, y, dist, w, gamma, metric, grad);
  }
}

inline double kl_divergence(const Matrix& p, const Matrix& q_unnorm, double q_total, Exec exec,
                            std::size_t* clamped = nullptr) {
  return exec == Exec::serial ? serial::kl_divergence(p, q_unnorm, q_total, clamped)
                              : omp::kl_divergence(p, q_unnorm, q_total, clamped);
}

/// Floor applied to q_ij inside the KL sum.
inline constexpr double kMinQ = 1e-12;

}  // namespace hypembed::kernels

#include <cmath>
#include <vector>

#include "hypembed/dataset.hpp"
#include "hypembed/kernels.hpp"

namespace hypembed::kernels::serial {

Matrix pairwise_distances(const Matrix& points, Metric metric) {
  const std::size_t m = points.rows();
  const std::vector<double> sq = row_squared_norms(points);
  Matrix dist(m, m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d =
          metric == Metric::hyperbolic
              ? unchecked::hyperbolic_distance(points.row(i), points.row(j), sq[i], sq[j])
              : std::sqrt(squared_distance(points.row(i), points.row(j)));
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

CauchyWeights cauchy_weights(const Matrix& dist, double gamma) {
  const std::size_t m = dist.rows();
  const double g2 = gamma * gamma;
  CauchyWeights out{Matrix(m, m, 0.0), 0.0};
  for (std::size_t i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double d = dist(i, j);
      const double w = g2 / (d * d + g2);
      out.w(i, j) = w;
      row_sum += w;
    }
    out.total += row_sum;
  }
  return out;
}

void kl_gradient(const Matrix& p, const Matrix& y, const Matrix& dist, const CauchyWeights& w,
                 double gamma, Metric metric, Matrix& grad) {
  const std::size_t m = y.rows();
  const std::size_t dim = y.cols();
  const double g2 = gamma * gamma;
  const std::vector<double> sq = row_squared_norms(y);
  grad = Matrix(m, dim, 0.0);
  std::vector<double> dd(dim);
  for (std::size_t i = 0; i < m; ++i) {
    std::span<double> gi = grad.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double d = dist(i, j);
      // dC/dd_ij = 4 (p_ij - q_ij) d / (d^2 + gamma^2)
      const double pq = 4.0 * (p(i, j) - w.w(i, j) / w.total) / (d * d + g2);
      if (metric == Metric::euclidean) {
        for (std::size_t k = 0; k < dim; ++k) gi[k] += pq * (y(i, k) - y(j, k));
      } else if (unchecked::distance_gradient(y.row(i), y.row(j), sq[i], sq[j], dd)) {
        for (std::size_t k = 0; k < dim; ++k) gi[k] += pq * d * dd[k];
      }
    }
  }
}

double kl_divergence(const Matrix& p, const Matrix& q_unnorm, double q_total,
                     std::size_t* clamped) {
  const std::size_t m = p.rows();
  double total = 0.0;
  std::size_t n_clamped = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double pij = p(i, j);
      if (pij <= 0.0) continue;
      double q = q_unnorm(i, j) / q_total;
      if (q < kMinQ) {
        q = kMinQ;
        ++n_clamped;
      }
      row += pij * std::log(pij / q);
    }
    total += row;
  }
  if (clamped) *clamped = n_clamped;
  return total;
}

}  // namespace hypembed::kernels::serial

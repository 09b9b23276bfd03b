#include <cmath>
#include <cstddef>
#include <vector>

#include "hypembed/dataset.hpp"
#include "hypembed/kernels.hpp"

namespace hypembed::kernels::omp {

namespace {

double sum_in_order(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

Matrix pairwise_distances(const Matrix& points, Metric metric) {
  const auto m = static_cast<std::ptrdiff_t>(points.rows());
  const std::vector<double> sq = row_squared_norms(points);
  Matrix dist(points.rows(), points.rows(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const auto r = static_cast<std::size_t>(i);
    std::span<double> out = dist.row(r);
    for (std::size_t j = 0; j < points.rows(); ++j) {
      if (j == r) continue;
      out[j] = metric == Metric::hyperbolic
                   ? unchecked::hyperbolic_distance(points.row(r), points.row(j), sq[r], sq[j])
                   : std::sqrt(squared_distance(points.row(r), points.row(j)));
    }
  }
  return dist;
}

CauchyWeights cauchy_weights(const Matrix& dist, double gamma) {
  const std::size_t m = dist.rows();
  const double g2 = gamma * gamma;
  CauchyWeights out{Matrix(m, m, 0.0), 0.0};
  std::vector<double> row_sums(m, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(m); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double d = dist(i, j);
      const double w = g2 / (d * d + g2);
      out.w(i, j) = w;
      row_sum += w;
    }
    row_sums[i] = row_sum;
  }
  out.total = sum_in_order(row_sums);
  return out;
}

void kl_gradient(const Matrix& p, const Matrix& y, const Matrix& dist, const CauchyWeights& w,
                 double gamma, Metric metric, Matrix& grad) {
  const std::size_t m = y.rows();
  const std::size_t dim = y.cols();
  const double g2 = gamma * gamma;
  const std::vector<double> sq = row_squared_norms(y);
  grad = Matrix(m, dim, 0.0);
#pragma omp parallel
  {
    std::vector<double> dd(dim);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(m); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      std::span<double> gi = grad.row(i);
      std::span<const double> yi = y.row(i);
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        const double d = dist(i, j);
        const double pq = 4.0 * (p(i, j) - w.w(i, j) / w.total) / (d * d + g2);
        std::span<const double> yj = y.row(j);
        if (metric == Metric::euclidean) {
          for (std::size_t k = 0; k < dim; ++k) gi[k] += pq * (yi[k] - yj[k]);
        } else if (unchecked::distance_gradient(yi, yj, sq[i], sq[j], dd)) {
          for (std::size_t k = 0; k < dim; ++k) gi[k] += pq * d * dd[k];
        }
      }
    }
  }
}

double kl_divergence(const Matrix& p, const Matrix& q_unnorm, double q_total,
                     std::size_t* clamped) {
  const std::size_t m = p.rows();
  std::vector<double> rows(m, 0.0);
  std::size_t n_clamped = 0;
#pragma omp parallel for schedule(static) reduction(+ : n_clamped)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(m); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
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
    rows[i] = row;
  }
  if (clamped) *clamped = n_clamped;
  return sum_in_order(rows);
}

}  // namespace hypembed::kernels::omp

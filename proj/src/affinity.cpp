#include "hypembed/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>

#include "hypembed/errors.hpp"

namespace hypembed {

namespace {

constexpr double kLogSigmaMin = -23.025850929940457;  // log(1e-10)
constexpr double kLogSigmaMax = 23.025850929940457;   // log(1e10)

// Fills out with the conditional row for sigma. Terms are shifted by the
// smallest off-diagonal d^2 so the largest exponent is exactly 0.
void fill_conditional(std::span<const double> dist_row, std::size_t i, double sigma,
                      double d2_min, std::span<double> out) {
  const double scale = 1.0 / (2.0 * sigma * sigma);
  double sum = 0.0;
  for (std::size_t j = 0; j < dist_row.size(); ++j) {
    if (j == i) {
      out[j] = 0.0;
      continue;
    }
    const double d2 = dist_row[j] * dist_row[j];
    out[j] = std::exp(-(d2 - d2_min) * scale);
    sum += out[j];
  }
  for (double& v : out) v /= sum;
}

double min_off_diagonal_sq(std::span<const double> dist_row, std::size_t i) {
  double d2_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < dist_row.size(); ++j) {
    if (j != i) d2_min = std::min(d2_min, dist_row[j] * dist_row[j]);
  }
  return d2_min;
}

double entropy_perplexity(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return std::exp2(h);
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw DataError(std::string(what) + " must be square");
}

}  // namespace

AffinityMatrix::AffinityMatrix(Matrix entries, AffinityKind kind)
    : entries_(std::move(entries)), kind_(kind) {
  require_square(entries_, "affinity matrix");
  const std::size_t m = entries_.rows();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (entries_(i, i) != 0.0) throw DataError("affinity matrix has a non-zero diagonal");
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double v = entries_(i, j);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DataError("affinity matrix has a negative or non-finite entry");
      }
      if (kind == AffinityKind::joint && v != entries_(j, i)) {
        throw DataError("joint affinity matrix is not symmetric");
      }
      row += v;
    }
    if (kind == AffinityKind::conditional && std::abs(row - 1.0) > kSumTolerance) {
      throw DataError("conditional affinity row " + std::to_string(i) + " sums to " +
                      std::to_string(row));
    }
    total += row;
  }
  if (kind == AffinityKind::joint && std::abs(total - 1.0) > kSumTolerance) {
    throw DataError("joint affinity matrix sums to " + std::to_string(total));
  }
}

void PerplexityTarget::validate(std::size_t m) const {
  if (!(value > 1.0 && value < static_cast<double>(m))) {
    throw ConfigError("perplexity " + std::to_string(value) + " must lie in (1, " +
                      std::to_string(m) + ")");
  }
  if (!(tol > 0.0)) throw ConfigError("perplexity tolerance must be positive");
  if (max_iter <= 0) throw ConfigError("perplexity search needs max_iter > 0");
}

double effective_perplexity(double requested, std::size_t m) {
  const double cap = (static_cast<double>(m) - 1.0) / 3.0;
  return std::min(requested, cap);
}

Matrix pairwise_distances(const Matrix& points, Metric metric, Exec exec) {
  if (points.rows() < 2) throw DataError("pairwise distances need at least 2 points");
  if (metric == Metric::hyperbolic) {
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (!(squared_norm(points.row(i)) < 1.0)) {
        throw GeometryError("point " + std::to_string(i) +
                            " is not strictly inside the unit ball");
      }
    }
  }
  return kernels::pairwise_distances(points, metric, exec);
}

std::vector<double> conditional_row(std::span<const double> dist_row, std::size_t i,
                                    double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("conditional_row needs sigma > 0");
  if (i >= dist_row.size() || dist_row.size() < 2) {
    throw DataError("conditional_row index out of range");
  }
  std::vector<double> out(dist_row.size());
  fill_conditional(dist_row, i, sigma, min_off_diagonal_sq(dist_row, i), out);
  return out;
}

double row_perplexity(std::span<const double> p_row) {
  double sum = 0.0;
  for (double v : p_row) {
    if (!(v >= 0.0)) throw DataError("probability row has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > AffinityMatrix::kSumTolerance) {
    throw DataError("probability row sums to " + std::to_string(sum));
  }
  return entropy_perplexity(p_row);
}

SigmaCalibration calibrate_sigma(std::span<const double> dist_row, std::size_t i,
                                 const PerplexityTarget& target) {
  const std::size_t m = dist_row.size();
  if (i >= m || m < 2) throw DataError("calibrate_sigma index out of range");
  target.validate(m);

  const double d2_min = min_off_diagonal_sq(dist_row, i);
  std::vector<double> row(m);
  SigmaCalibration best;

  bool equidistant = true;
  for (std::size_t j = 0; j < m; ++j) {
    if (j != i && dist_row[j] * dist_row[j] != d2_min) {
      equidistant = false;
      break;
    }
  }
  if (equidistant) {
    // The row is uniform for every sigma.
    best.sigma = 1.0;
    best.perplexity = static_cast<double>(m - 1);
    best.converged = std::abs(best.perplexity - target.value) <= target.tol;
    return best;
  }

  double lo = kLogSigmaMin;
  double hi = kLogSigmaMax;
  double perp_lo = 1.0;  // limits as sigma -> 0 and sigma -> infinity
  double perp_hi = static_cast<double>(m - 1);
  double best_err = std::numeric_limits<double>::infinity();
  const double slack = 1e-9 * static_cast<double>(m);

  for (int iter = 1; iter <= target.max_iter; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double sigma = std::exp(mid);
    fill_conditional(dist_row, i, sigma, d2_min, row);
    const double perp = entropy_perplexity(row);
    if (perp < perp_lo - slack || perp > perp_hi + slack) {
      throw std::logic_error("perplexity is not monotone in sigma during calibration");
    }
    const double err = std::abs(perp - target.value);
    if (err < best_err) {
      best_err = err;
      best.sigma = sigma;
      best.perplexity = perp;
    }
    best.iterations = iter;
    if (err <= target.tol) {
      best.converged = true;
      break;
    }
    if (perp > target.value) {
      hi = mid;
      perp_hi = perp;
    } else {
      lo = mid;
      perp_lo = perp;
    }
  }
  return best;
}

AffinityMatrix conditional_affinities(const Matrix& dist, const PerplexityTarget& target,
                                      std::vector<SigmaCalibration>* calibration) {
  require_square(dist, "distance matrix");
  const std::size_t m = dist.rows();
  target.validate(m);
  Matrix p(m, m, 0.0);
  std::vector<SigmaCalibration> cal(m);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(m); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    try {
      cal[i] = calibrate_sigma(dist.row(i), i, target);
      fill_conditional(dist.row(i), i, cal[i].sigma, min_off_diagonal_sq(dist.row(i), i),
                       p.row(i));
    } catch (...) {
#pragma omp critical(hypembed_calibration_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  if (calibration) *calibration = std::move(cal);
  return AffinityMatrix(std::move(p), AffinityKind::conditional);
}

AffinityMatrix symmetrize(const AffinityMatrix& conditional) {
  if (conditional.kind() != AffinityKind::conditional) {
    throw DataError("symmetrize expects a conditional affinity matrix");
  }
  const std::size_t m = conditional.size();
  if (m < 2) throw DataError("symmetrize needs at least 2 points");
  const double denom = 2.0 * static_cast<double>(m);
  Matrix joint(m, m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = (conditional(i, j) + conditional(j, i)) / denom;
      joint(i, j) = v;
      joint(j, i) = v;
    }
  }
  return AffinityMatrix(std::move(joint), AffinityKind::joint);
}

AffinityMatrix high_dim_affinities(const Matrix& points, Metric metric,
                                   const PerplexityTarget& target, Exec exec) {
  return symmetrize(conditional_affinities(pairwise_distances(points, metric, exec), target));
}

AffinityMatrix low_dim_q(const Matrix& points, CauchyKernelParams params, Metric metric,
                         Exec exec) {
  params.validate();
  const Matrix dist = pairwise_distances(points, metric, exec);
  kernels::CauchyWeights w = kernels::cauchy_weights(dist, params.gamma_scale, exec);
  for (double& v : w.w.data()) v /= w.total;
  return AffinityMatrix(std::move(w.w), AffinityKind::joint);
}

}  // namespace hypembed

#include "hypembed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "json.hpp"

#include "hypembed/affinity.hpp"
#include "hypembed/errors.hpp"

namespace hypembed {

namespace {

void require_k(std::size_t k, std::size_t m) {
  if (k == 0 || k >= m) {
    throw ConfigError("k = " + std::to_string(k) + " must lie in [1, " + std::to_string(m) + ")");
  }
}

std::string format_value(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.10g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

std::vector<std::vector<std::size_t>> nearest_neighbors(const Matrix& points, std::size_t k,
                                                        Metric metric) {
  const std::size_t m = points.rows();
  require_k(k, m);
  const Matrix dist = pairwise_distances(points, metric);
  std::vector<std::vector<std::size_t>> out(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(m); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    std::vector<std::size_t> order;
    order.reserve(m - 1);
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) order.push_back(j);
    }
    auto closer = [&](std::size_t a, std::size_t b) {
      return dist(i, a) < dist(i, b) || (dist(i, a) == dist(i, b) && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                      order.end(), closer);
    order.resize(k);
    out[i] = std::move(order);
  }
  return out;
}

double knn_preservation(const Matrix& x, const Matrix& y, std::size_t k, Metric metric_hi,
                        Metric metric_lo) {
  if (x.rows() != y.rows()) throw DataError("knn_preservation needs equal point counts");
  const auto hi = nearest_neighbors(x, k, metric_hi);
  const auto lo = nearest_neighbors(y, k, metric_lo);
  std::size_t shared = 0;
  for (std::size_t i = 0; i < hi.size(); ++i) {
    std::vector<std::size_t> a = hi[i];
    std::vector<std::size_t> b = lo[i];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<std::size_t> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    shared += common.size();
  }
  return static_cast<double>(shared) / static_cast<double>(k * hi.size());
}

double norm_rmse(const Matrix& x, const Matrix& y) { return std::sqrt(distance_loss(x, y)); }

double purity_at_k(const Dataset& y, std::size_t k, Metric metric) {
  if (!y.has_labels()) throw DataError("purity_at_k needs labels");
  y.validate();
  const auto nn = nearest_neighbors(y.points, k, metric);
  std::size_t same = 0;
  for (std::size_t i = 0; i < nn.size(); ++i) {
    same += static_cast<std::size_t>(std::count_if(
        nn[i].begin(), nn[i].end(), [&](std::size_t j) { return y.labels[j] == y.labels[i]; }));
  }
  return static_cast<double>(same) / static_cast<double>(k * nn.size());
}

QualityReport quality_report(const Dataset& x, const Dataset& y, const EmbedConfig& config,
                             std::size_t k) {
  if (x.size() != y.size()) throw DataError("quality report needs equal point counts");
  const EmbedConfig cfg = config.resolved();
  const Metric metric = cfg.metric();
  QualityReport r;
  r.knn_preservation = knn_preservation(x.points, y.points, k, metric, metric);
  r.norm_rmse = norm_rmse(x.points, y.points);
  Dataset labelled = y;
  if (!labelled.has_labels()) labelled.labels = x.labels;
  r.purity_at_k = labelled.has_labels() ? purity_at_k(labelled, k, metric) : 0.0;
  const PerplexityTarget target{effective_perplexity(cfg.perplexity, x.size())};
  const AffinityMatrix p = high_dim_affinities(x.points, metric, target);
  const AffinityMatrix q = low_dim_q(y.points, CauchyKernelParams{cfg.gamma_scale}, metric);
  r.final_kl = kl_divergence(p, q);
  r.final_dist_loss = distance_loss(x.points, y.points);
  return r;
}

std::string to_key_value(const QualityReport& r) {
  std::string out;
  out += "knn_preservation " + format_value(r.knn_preservation) + "\n";
  out += "norm_rmse " + format_value(r.norm_rmse) + "\n";
  out += "purity_at_k " + format_value(r.purity_at_k) + "\n";
  out += "final_kl " + format_value(r.final_kl) + "\n";
  out += "final_dist_loss " + format_value(r.final_dist_loss) + "\n";
  return out;
}

std::string to_json(const QualityReport& r) {
  const nlohmann::ordered_json j = {
      {"knn_preservation", r.knn_preservation},
      {"norm_rmse", r.norm_rmse},
      {"purity_at_k", r.purity_at_k},
      {"final_kl", r.final_kl},
      {"final_dist_loss", r.final_dist_loss},
  };
  return j.dump(2) + "\n";
}

double field_coordinate(FieldRange range, std::size_t idx, std::size_t resolution) noexcept {
  const double t = static_cast<double>(idx) / static_cast<double>(resolution - 1);
  return range.min + t * (range.max - range.min);
}

Matrix gradient_field_grid(Mode mode, const ForceFieldParams& params, FieldRange hi_range,
                           FieldRange lo_range, std::size_t resolution) {
  if (resolution < 2) throw ConfigError("gradient field resolution must be >= 2");
  for (const FieldRange& r : {hi_range, lo_range}) {
    if (!(r.min > 0.0 && r.max > r.min)) {
      throw ConfigError("gradient field ranges must be positive and increasing");
    }
  }
  Matrix grid(resolution, resolution);
  for (std::size_t r = 0; r < resolution; ++r) {
    const double lo = field_coordinate(lo_range, r, resolution);
    for (std::size_t c = 0; c < resolution; ++c) {
      grid(r, c) = gradient_force(field_coordinate(hi_range, c, resolution), lo, mode, params);
    }
  }
  return grid;
}

}  // namespace hypembed

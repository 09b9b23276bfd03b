#include "hypembed/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hypembed/errors.hpp"
#include "hypembed/kernels.hpp"
#include "hypembed/random.hpp"

namespace hypembed {

namespace {

constexpr std::uint64_t kInitStream = 0x1417;

void require_same_rows(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows()) {
    throw DataError("point count mismatch: " + std::to_string(x.rows()) + " vs " +
                    std::to_string(y.rows()));
  }
}

Matrix initial_embedding(std::size_t m, const EmbedConfig& cfg) {
  const CounterRng rng = CounterRng(cfg.seed).split(kInitStream);
  Matrix y(m, cfg.out_dim);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < cfg.out_dim; ++k) {
      y(i, k) = cfg.init_mean + cfg.init_std * rng.normal(i * cfg.out_dim + k);
    }
    if (cfg.metric() == Metric::hyperbolic) project_to_ball_inplace(y.row(i), cfg.eps);
  }
  return y;
}

bool all_finite(const Matrix& m) {
  for (double v : m.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::cosne:
      return "cosne";
    case Mode::htsne:
      return "htsne";
    case Mode::tsne:
      return "tsne";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  if (name == "cosne") return Mode::cosne;
  if (name == "htsne") return Mode::htsne;
  if (name == "tsne") return Mode::tsne;
  throw ConfigError("unknown mode '" + std::string(name) + "' (expected cosne|htsne|tsne)");
}

double default_learning_rate(Mode mode) noexcept { return mode == Mode::tsne ? 20.0 : 0.01; }

double EmbedConfig::effective_learning_rate() const noexcept {
  return learning_rate.value_or(default_learning_rate(mode));
}

EmbedConfig EmbedConfig::resolved() const {
  EmbedConfig out = *this;
  if (mode != Mode::cosne) {
    out.gamma_scale = 1.0;
    out.lambda2 = 0.0;
  }
  out.learning_rate = effective_learning_rate();
  return out;
}

void EmbedConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (out_dim == 0) fail("out_dim must be positive");
  if (!(perplexity > 1.0)) fail("perplexity must exceed 1");
  if (!(gamma_scale > 0.0) || !std::isfinite(gamma_scale)) fail("gamma must be positive");
  if (!(lambda1 >= 0.0) || !std::isfinite(lambda1)) fail("lambda1 must be non-negative");
  if (!(lambda2 >= 0.0) || !std::isfinite(lambda2)) fail("lambda2 must be non-negative");
  if (!(effective_learning_rate() > 0.0)) fail("learning rate must be positive");
  if (n_iter <= 0) fail("n_iter must be positive");
  if (stage_boundary < 0 || stage_boundary > n_iter) {
    fail("stage_boundary must lie in [0, n_iter]");
  }
  if (!(exaggeration >= 1.0)) fail("exaggeration must be >= 1");
  if (exaggeration_iters < 0) fail("exaggeration_iters must be non-negative");
  if (!(momentum_early >= 0.0 && momentum_early < 1.0) ||
      !(momentum_late >= 0.0 && momentum_late < 1.0)) {
    fail("momentum must lie in [0, 1)");
  }
  if (momentum_switch_iter < 0) fail("momentum_switch_iter must be non-negative");
  if (!(init_std >= 0.0) || !std::isfinite(init_mean)) fail("invalid initialization");
}

std::vector<std::string> EmbedConfig::warnings() const {
  std::vector<std::string> out;
  if (lambda1 == 0.0) {
    out.emplace_back(mode == Mode::cosne && lambda2 > 0.0
                         ? "lambda1 = 0: only the distance loss is active"
                         : "lambda1 = 0: no loss term is active");
  }
  if (mode != Mode::cosne && (gamma_scale != 1.0 || lambda2 != 0.0)) {
    out.emplace_back(std::string(to_string(mode)) +
                     " mode uses gamma = 1 and no distance loss; --gamma/--lambda2 ignored");
  }
  if (!learning_rate) {
    out.emplace_back("learning rate not given; using the " + std::string(to_string(mode)) +
                     " default " + std::to_string(default_learning_rate(mode)));
  }
  return out;
}

double kl_divergence(const AffinityMatrix& p, const AffinityMatrix& q, std::size_t* clamped) {
  if (p.size() != q.size()) throw DataError("KL divergence needs matrices of equal size");
  return kernels::serial::kl_divergence(p.entries(), q.entries(), 1.0, clamped);
}

double distance_loss(const Matrix& x, const Matrix& y) {
  require_same_rows(x, y);
  if (x.rows() == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double diff = squared_norm(x.row(i)) - squared_norm(y.row(i));
    sum += diff * diff;
  }
  return sum / static_cast<double>(x.rows());
}

Matrix distance_loss_gradient(const Matrix& x, const Matrix& y) {
  require_same_rows(x, y);
  Matrix grad(y.rows(), y.cols(), 0.0);
  const double scale = -4.0 / static_cast<double>(y.rows());
  for (std::size_t i = 0; i < y.rows(); ++i) {
    const double diff = squared_norm(x.row(i)) - squared_norm(y.row(i));
    for (std::size_t k = 0; k < y.cols(); ++k) grad(i, k) = scale * diff * y(i, k);
  }
  return grad;
}

Matrix distance_point_gradient(const Matrix& x, const Matrix& y) {
  Matrix grad = distance_loss_gradient(x, y);
  for (double& g : grad.data()) g *= static_cast<double>(y.rows());
  return grad;
}

Matrix kl_gradient(const AffinityMatrix& p, const Matrix& y, CauchyKernelParams params,
                   Metric metric, Exec exec) {
  params.validate();
  if (p.size() != y.rows()) throw DataError("affinity and embedding sizes differ");
  const Matrix dist = pairwise_distances(y, metric, exec);
  const kernels::CauchyWeights w = kernels::cauchy_weights(dist, params.gamma_scale, exec);
  Matrix grad;
  kernels::kl_gradient(p.entries(), y, dist, w, params.gamma_scale, metric, grad, exec);
  return grad;
}

double objective(const AffinityMatrix& p, const Matrix& x, const Matrix& y,
                 const EmbedConfig& config) {
  const EmbedConfig cfg = config.resolved();
  const AffinityMatrix q = low_dim_q(y, CauchyKernelParams{cfg.gamma_scale}, cfg.metric(),
                                     cfg.exec);
  double total = cfg.lambda1 * kl_divergence(p, q);
  if (cfg.distance_loss_enabled()) total += cfg.lambda2 * distance_loss(x, y);
  return total;
}

Matrix total_gradient(const AffinityMatrix& p, const Matrix& x, const Matrix& y,
                      const EmbedConfig& config) {
  const EmbedConfig cfg = config.resolved();
  Matrix grad = kl_gradient(p, y, CauchyKernelParams{cfg.gamma_scale}, cfg.metric(), cfg.exec);
  for (double& g : grad.data()) g *= cfg.lambda1;
  if (cfg.distance_loss_enabled()) {
    const Matrix h = distance_loss_gradient(x, y);
    for (std::size_t k = 0; k < grad.data().size(); ++k) grad.data()[k] += cfg.lambda2 * h.data()[k];
  }
  return grad;
}

Matrix riemannian_gradient(const Matrix& y, const Matrix& grad, Metric metric) {
  if (y.rows() != grad.rows() || y.cols() != grad.cols()) {
    throw DataError("gradient shape does not match the embedding");
  }
  Matrix out = grad;
  if (metric == Metric::euclidean) return out;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    const double a = 1.0 - squared_norm(y.row(i));
    const double scale = a * a / 4.0;
    for (double& g : out.row(i)) g *= scale;
  }
  return out;
}

Matrix riemannian_step(const Matrix& y, const Matrix& grad, double lr, BallMargin eps,
                       Metric metric) {
  if (!all_finite(grad)) {
    throw OptimizationError("non-finite gradient in Riemannian step", {});
  }
  const Matrix rgrad = riemannian_gradient(y, grad, metric);
  Matrix out = y;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    std::span<double> yi = out.row(i);
    for (std::size_t k = 0; k < y.cols(); ++k) yi[k] -= lr * rgrad(i, k);
    if (metric == Metric::hyperbolic) project_to_ball_inplace(yi, eps);
  }
  return out;
}

EmbeddingResult run_embedding(const Dataset& x, const EmbedConfig& config) {
  const EmbedConfig cfg = config.resolved();
  cfg.validate();
  const Metric metric = cfg.metric();
  const std::size_t m = x.size();
  if (m < 3) throw DataError("embedding needs at least 3 points");
  if (metric == Metric::hyperbolic) {
    x.validate_in_ball();
  } else {
    x.validate();
  }

  EmbeddingResult result;
  result.config = cfg;
  result.perplexity_used = effective_perplexity(cfg.perplexity, m);
  const PerplexityTarget target{result.perplexity_used};
  const AffinityMatrix p = high_dim_affinities(x.points, metric, target, cfg.exec);
  Matrix p_exaggerated = p.entries();
  for (double& v : p_exaggerated.data()) v *= cfg.exaggeration;

  const double lr = cfg.effective_learning_rate();
  const double gamma = cfg.gamma_scale;
  Matrix y = initial_embedding(m, cfg);
  Matrix velocity(m, cfg.out_dim, 0.0);
  Matrix gains(m, cfg.out_dim, 1.0);
  Matrix kl_grad;
  result.loss_trace.reserve(static_cast<std::size_t>(cfg.n_iter));

  for (int iter = 0; iter < cfg.n_iter; ++iter) {
    const bool exaggerate = iter < cfg.exaggeration_iters;
    const bool dist_active = cfg.distance_loss_enabled() && iter >= cfg.stage_boundary;
    const double momentum = iter < cfg.momentum_switch_iter ? cfg.momentum_early
                                                            : cfg.momentum_late;

    const Matrix dist = kernels::pairwise_distances(y, metric, cfg.exec);
    const kernels::CauchyWeights w = kernels::cauchy_weights(dist, gamma, cfg.exec);
    kernels::kl_gradient(exaggerate ? p_exaggerated : p.entries(), y, dist, w, gamma, metric,
                         kl_grad, cfg.exec);

    LossRecord rec;
    rec.kl = kernels::kl_divergence(p.entries(), w.w, w.total, cfg.exec, &result.kl_clamped);
    rec.dist = distance_loss(x.points, y);
    rec.total = cfg.lambda1 * rec.kl + (dist_active ? cfg.lambda2 * rec.dist : 0.0);
    result.loss_trace.push_back(rec);
    if (!std::isfinite(rec.total)) {
      throw OptimizationError("non-finite loss at iteration " + std::to_string(iter),
                              result.loss_trace);
    }

    Matrix grad = kl_grad;
    for (double& g : grad.data()) g *= cfg.lambda1;
    if (!all_finite(grad)) {
      throw OptimizationError("non-finite gradient at iteration " + std::to_string(iter),
                              result.loss_trace);
    }

    // The KL part is rescaled by the inverse metric; the norm term steps in the chart.
    Matrix rgrad = riemannian_gradient(y, grad, metric);
    if (dist_active) {
      const Matrix h_grad = distance_point_gradient(x.points, y);
      for (std::size_t k = 0; k < rgrad.data().size(); ++k) {
        rgrad.data()[k] += cfg.lambda2 * h_grad.data()[k];
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::span<double> yi = y.row(i);
      std::span<double> vi = velocity.row(i);
      std::span<double> gi = gains.row(i);
      for (std::size_t k = 0; k < cfg.out_dim; ++k) {
        const double g = rgrad(i, k);
        if (cfg.use_gains) {
          gi[k] = (g > 0.0) != (vi[k] > 0.0) ? gi[k] + 0.2 : gi[k] * 0.8;
          gi[k] = std::max(gi[k], cfg.min_gain);
        }
        vi[k] = momentum * vi[k] - lr * gi[k] * g;
        yi[k] += vi[k];
      }
      if (metric == Metric::hyperbolic) project_to_ball_inplace(yi, cfg.eps);
    }
    result.iterations_run = iter + 1;
  }

  result.embedding.points = std::move(y);
  result.embedding.labels = x.labels;
  result.embedding.name = x.name + "-" + std::string(to_string(cfg.mode));
  return result;
}

double gradient_force(double hi_dist, double lo_dist, Mode mode,
                      const ForceFieldParams& params) {
  const double sigma = params.sigma;
  const double gauss_norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
  const double p = gauss_norm * std::exp(-hi_dist * hi_dist / (2.0 * sigma * sigma));
  if (params.matched_kernels) {
    const double q = gauss_norm * std::exp(-lo_dist * lo_dist / (2.0 * sigma * sigma));
    return (p - q) * 2.0 * lo_dist / (sigma * sigma);
  }
  const double gamma = mode == Mode::cosne ? params.gamma_scale : 1.0;
  const double g2 = gamma * gamma;
  const double q = g2 / (lo_dist * lo_dist + g2) / (std::numbers::pi * gamma);
  return (p - q) * 4.0 * lo_dist / (lo_dist * lo_dist + g2);
}

}  // namespace hypembed

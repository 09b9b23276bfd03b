#pragma once

// Training objective: lambda1 * KL(P || Q) + lambda2 * distance-to-origin loss,
// minimized by Riemannian gradient descent on the Poincare ball. The htsne and
// tsne modes are the hyperbolic Student-t and classical Euclidean ablations.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hypembed/affinity.hpp"
#include "hypembed/dataset.hpp"
#include "hypembed/distributions.hpp"
#include "hypembed/geometry.hpp"
#include "hypembed/matrix.hpp"

namespace hypembed {

enum class Mode { cosne, htsne, tsne };

std::string_view to_string(Mode mode) noexcept;
/// Throws ConfigError for an unknown name.
Mode parse_mode(std::string_view name);

struct EmbedConfig {
  Mode mode = Mode::cosne;
  std::size_t out_dim = 2;
  double perplexity = 30.0;
  double gamma_scale = 0.1;
  double lambda1 = 10.0;
  double lambda2 = 0.01;
  /// Unset means the mode default (see default_learning_rate).
  std::optional<double> learning_rate;
  int n_iter = 1000;
  int stage_boundary = 500;
  double exaggeration = 12.0;
  int exaggeration_iters = 250;
  double momentum_early = 0.5;
  double momentum_late = 0.8;
  int momentum_switch_iter = 250;
  /// Per-parameter gains: +0.2 while the update keeps its direction, x0.8 on
  /// a sign flip, floored at min_gain.
  bool use_gains = true;
  double min_gain = 0.01;
  std::uint64_t seed = 0;
  BallMargin eps;
  double init_mean = 0.01;
  double init_std = 1e-2;
  Exec exec = Exec::parallel;

  Metric metric() const noexcept {
    return mode == Mode::tsne ? Metric::euclidean : Metric::hyperbolic;
  }
  double effective_learning_rate() const noexcept;
  bool distance_loss_enabled() const noexcept { return mode == Mode::cosne && lambda2 > 0.0; }

  /// Copy with the mode's forced settings applied: htsne fixes gamma = 1 and
  /// lambda2 = 0; tsne additionally uses the Euclidean metric.
  EmbedConfig resolved() const;
  /// Throws ConfigError on out-of-range values.
  void validate() const;
  /// Human-readable notes about settings that change the objective.
  std::vector<std::string> warnings() const;
};

double default_learning_rate(Mode mode) noexcept;

struct LossRecord {
  double kl = 0.0;
  double dist = 0.0;
  double total = 0.0;
};

struct EmbeddingResult {
  Dataset embedding;  ///< low-dimensional points; labels copied from the input
  std::vector<LossRecord> loss_trace;
  EmbedConfig config;  ///< resolved configuration actually used
  double perplexity_used = 0.0;
  int iterations_run = 0;
  std::size_t kl_clamped = 0;  ///< q entries floored while evaluating the final KL
};

/// Raised when the optimization produces a non-finite loss or gradient.
class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, std::vector<LossRecord> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<LossRecord>& trace() const noexcept { return trace_; }

 private:
  std::vector<LossRecord> trace_;
};

/// sum_ij p_ij log(p_ij / q_ij) over p_ij > 0. q entries below 1e-12 are
/// clamped and counted in *clamped.
double kl_divergence(const AffinityMatrix& p, const AffinityMatrix& q,
                     std::size_t* clamped = nullptr);

/// (1/m) sum_i (|x_i|^2 - |y_i|^2)^2.
double distance_loss(const Matrix& x, const Matrix& y);

/// Gradient of kl_divergence(p, low_dim_q(y)) with respect to the chart
/// coordinates of y. Coincident pairs contribute nothing.
Matrix kl_gradient(const AffinityMatrix& p, const Matrix& y, CauchyKernelParams params,
                   Metric metric, Exec exec = Exec::parallel);

/// -(4/m) (|x_i|^2 - |y_i|^2) y_i per row.
Matrix distance_loss_gradient(const Matrix& x, const Matrix& y);

/// Per-point form -4 (|x_i|^2 - |y_i|^2) y_i, i.e. m times the above.
/// This is what the optimizer applies after the stage boundary.
Matrix distance_point_gradient(const Matrix& x, const Matrix& y);

/// lambda1 * KL(P || Q(y)) + lambda2 * distance_loss(x, y); the second term
/// only when the config enables the distance loss.
double objective(const AffinityMatrix& p, const Matrix& x, const Matrix& y,
                 const EmbedConfig& config);

/// Euclidean gradient of objective() with respect to y.
Matrix total_gradient(const AffinityMatrix& p, const Matrix& x, const Matrix& y,
                      const EmbedConfig& config);

/// Scales each row of a Euclidean gradient by the inverse metric
/// (1 - |y_i|^2)^2 / 4. Euclidean metric leaves it unchanged.
Matrix riemannian_gradient(const Matrix& y, const Matrix& grad, Metric metric);

/// y_i - lr * rgrad_i followed by projection into the ball (hyperbolic
/// metric only). Throws OptimizationError on a non-finite gradient.
Matrix riemannian_step(const Matrix& y, const Matrix& grad, double lr, BallMargin eps,
                       Metric metric = Metric::hyperbolic);

/// Runs the full optimization. Deterministic for a given (x, config).
EmbeddingResult run_embedding(const Dataset& x, const EmbedConfig& config);

/// Kernels used for the isolated-pair force analysis.
struct ForceFieldParams {
  double gamma_scale = 0.1;  ///< Cauchy scale for cosne
  double sigma = 1.0;        ///< bandwidth of the high-dimensional normal
  /// Use the high-dimensional normal on both sides (the force then vanishes
  /// on the diagonal hi == lo).
  bool matched_kernels = false;
};

/// Attraction (+) / repulsion (-) between two embeddings at low-dimensional
/// distance lo whose inputs are hi apart: (p - q) * 2 |d log k_lo / d lo|,
/// where p and q are the normalized one-dimensional densities of the high-
/// and low-dimensional kernels. htsne and tsne use the gamma = 1 kernel.
double gradient_force(double hi_dist, double lo_dist, Mode mode,
                      const ForceFieldParams& params = {});

}  // namespace hypembed

// Serial reference vs OpenMP kernels on random embeddings of growing size.
#include <benchmark/benchmark.h>

#include <random>

#include "hypembed/kernels.hpp"

using namespace hypembed;

namespace {

struct Instance {
  Matrix y;
  Matrix p;
  Matrix dist;
  kernels::CauchyWeights w;
};

Instance make_instance(std::size_t m) {
  std::mt19937_64 eng(m);
  std::uniform_real_distribution<> u(-0.6, 0.6);
  Instance in;
  in.y = Matrix(m, 2);
  for (double& v : in.y.data()) v = u(eng);
  in.p = Matrix(m, m, 0.0);
  const double uniform = 1.0 / static_cast<double>(m * (m - 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) in.p(i, j) = uniform;
    }
  }
  in.dist = kernels::serial::pairwise_distances(in.y, Metric::hyperbolic);
  in.w = kernels::serial::cauchy_weights(in.dist, 0.1);
  return in;
}

template <Exec E>
void BM_PairwiseDistances(benchmark::State& state) {
  const Instance in = make_instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::pairwise_distances(in.y, Metric::hyperbolic, E));
  }
}

template <Exec E>
void BM_KlGradient(benchmark::State& state) {
  const Instance in = make_instance(static_cast<std::size_t>(state.range(0)));
  Matrix grad;
  for (auto _ : state) {
    kernels::kl_gradient(in.p, in.y, in.dist, in.w, 0.1, Metric::hyperbolic, grad, E);
    benchmark::DoNotOptimize(grad.data().data());
  }
}

template <Exec E>
void BM_Iteration(benchmark::State& state) {
  const Instance in = make_instance(static_cast<std::size_t>(state.range(0)));
  Matrix grad;
  for (auto _ : state) {
    const Matrix d = kernels::pairwise_distances(in.y, Metric::hyperbolic, E);
    const kernels::CauchyWeights w = kernels::cauchy_weights(d, 0.1, E);
    kernels::kl_gradient(in.p, in.y, d, w, 0.1, Metric::hyperbolic, grad, E);
    benchmark::DoNotOptimize(kernels::kl_divergence(in.p, w.w, w.total, E));
  }
}

}  // namespace

BENCHMARK(BM_PairwiseDistances<Exec::serial>)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_PairwiseDistances<Exec::parallel>)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_KlGradient<Exec::serial>)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_KlGradient<Exec::parallel>)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_Iteration<Exec::serial>)->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_Iteration<Exec::parallel>)->RangeMultiplier(4)->Range(64, 1024);

BENCHMARK_MAIN();

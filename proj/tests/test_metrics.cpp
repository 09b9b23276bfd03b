#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hypembed/errors.hpp"
#include "hypembed/metrics.hpp"
#include "support/generators.hpp"

using namespace hypembed;

namespace {

Matrix permute_rows(const Matrix& m, const std::vector<std::size_t>& perm) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::copy(m.row(perm[i]).begin(), m.row(perm[i]).end(), out.row(i).begin());
  }
  return out;
}

}  // namespace

TEST_CASE("nearest_neighbors breaks ties by index") {
  Matrix p(4, 1, 0.0);
  p(1, 0) = 1.0;
  p(2, 0) = -1.0;
  p(3, 0) = 2.0;
  const auto nn = nearest_neighbors(p, 2, Metric::euclidean);
  CHECK(nn[0] == std::vector<std::size_t>{1, 2});
  CHECK_THROWS_AS(nearest_neighbors(p, 4, Metric::euclidean), ConfigError);
}

TEST_CASE("knn_preservation") {
  testing::Gen g(1);
  const Matrix x = g.ball_points(100, 5);
  CHECK(knn_preservation(x, x, 5, Metric::hyperbolic, Metric::hyperbolic) == 1.0);

  std::vector<std::size_t> perm(100);
  std::iota(perm.begin(), perm.end(), 0);
  double mean = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::shuffle(perm.begin(), perm.end(), g.engine());
    mean += knn_preservation(x, permute_rows(x, perm), 5, Metric::hyperbolic, Metric::hyperbolic);
  }
  CHECK(mean / 100.0 < 0.15);
  CHECK_THROWS_AS(knn_preservation(x, Matrix(3, 2), 5, Metric::hyperbolic, Metric::hyperbolic),
                  DataError);
}

TEST_CASE("property: knn_preservation is invariant under reordering both sets") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    testing::Gen g(seed);
    const Matrix x = g.ball_points(40, 4), y = g.ball_points(40, 2);
    std::vector<std::size_t> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g.engine());
    CHECK(knn_preservation(permute_rows(x, perm), permute_rows(y, perm), 5, Metric::hyperbolic,
                           Metric::hyperbolic) ==
          doctest::Approx(knn_preservation(x, y, 5, Metric::hyperbolic, Metric::hyperbolic)));
  }
}

TEST_CASE("norm_rmse") {
  Matrix x(1, 1, 0.9), y(1, 1, 0.5);
  CHECK(norm_rmse(x, y) == doctest::Approx(0.56));
  CHECK(norm_rmse(x, x) == 0.0);
  testing::Gen g(3);
  const Matrix a = g.ball_points(30, 4), b = g.ball_points(30, 2);
  CHECK(norm_rmse(a, b) == doctest::Approx(std::sqrt(distance_loss(a, b))));
}

TEST_CASE("purity_at_k") {
  const Dataset sep = testing::separated_clusters(4, 10, 2);
  CHECK(purity_at_k(sep, 5, Metric::hyperbolic) == 1.0);

  testing::Gen g(8);
  Dataset shuffled = testing::separated_clusters(5, 20, 3, 0.1);
  std::shuffle(shuffled.labels.begin(), shuffled.labels.end(), g.engine());
  CHECK(purity_at_k(shuffled, 5, Metric::hyperbolic) < 0.35);

  Dataset pair;
  pair.points = Matrix(2, 1, 0.0);
  pair.points(1, 0) = 0.1;
  pair.labels = {"a", "b"};
  CHECK(purity_at_k(pair, 1, Metric::euclidean) == 0.0);

  Dataset unlabeled;
  unlabeled.points = Matrix(3, 2, 0.0);
  CHECK_THROWS_AS(purity_at_k(unlabeled, 1, Metric::euclidean), DataError);
}

TEST_CASE("quality_report and its serializations") {
  Dataset x = testing::separated_clusters(3, 8, 4);
  const QualityReport r = quality_report(x, x, EmbedConfig{});
  CHECK(r.knn_preservation == 1.0);
  CHECK(r.norm_rmse == 0.0);
  CHECK(r.purity_at_k == 1.0);
  const std::string kv = to_key_value(r);
  CHECK(kv.find("knn_preservation 1\n") != std::string::npos);
  const std::string js = to_json(r);
  CHECK(js.find("\"purity_at_k\"") != std::string::npos);
}

TEST_CASE("gradient_field_grid layout and sign structure") {
  const FieldRange range{0.05, 5.0};
  const std::size_t n = 100;
  const ForceFieldParams params;
  const Matrix c = gradient_field_grid(Mode::cosne, params, range, range, n);
  const Matrix h = gradient_field_grid(Mode::htsne, params, range, range, n);
  CHECK(c.rows() == n);
  CHECK(c(3, 7) == gradient_force(field_coordinate(range, 7, n), field_coordinate(range, 3, n),
                                  Mode::cosne, params));
  CHECK(field_coordinate(range, 0, n) == 0.05);
  CHECK(field_coordinate(range, n - 1, n) == doctest::Approx(5.0));

  const double c_min = *std::min_element(c.data().begin(), c.data().end());
  const double h_min = *std::min_element(h.data().begin(), h.data().end());
  CHECK(h_min > c_min);
  CHECK_THROWS_AS(gradient_field_grid(Mode::cosne, params, range, range, 1), ConfigError);
  CHECK_THROWS_AS(gradient_field_grid(Mode::cosne, params, {1.0, 0.5}, range, 5), ConfigError);
}

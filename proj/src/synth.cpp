#include <string>

#include "hypembed/distributions.hpp"
#include "hypembed/errors.hpp"
#include "hypembed/io.hpp"

namespace hypembed {

void SynthSpec::validate() const {
  if (dim == 0) throw ConfigError("synthetic spec needs dim >= 1");
  if (clusters.empty()) throw ConfigError("synthetic spec has no clusters");
  for (const ClusterSpec& c : clusters) {
    if (c.mean.size() != dim) throw ConfigError("cluster '" + c.label + "' mean has wrong dim");
    if (!(squared_norm(c.mean) < 1.0)) {
      throw ConfigError("cluster '" + c.label + "' mean lies outside the unit ball");
    }
    if (!(c.sigma > 0.0)) throw ConfigError("cluster '" + c.label + "' needs sigma > 0");
    if (c.count == 0) throw ConfigError("cluster '" + c.label + "' needs count >= 1");
  }
}

SynthSpec five_cluster_preset(std::uint64_t seed) {
  SynthSpec spec;
  spec.dim = 5;
  spec.seed = seed;
  const std::vector<std::vector<double>> means = {
      {0.1, 0.0, 0.0, 0.0, 0.0},  {0.0, -0.2, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.9, 0.0, 0.0},
      {0.0, 0.0, 0.0, -0.9, 0.0}, {0.0, 0.0, 0.0, 0.0, 0.0},
  };
  for (std::size_t c = 0; c < means.size(); ++c) {
    spec.clusters.push_back(ClusterSpec{means[c], 1.0, 20, "c" + std::to_string(c)});
  }
  return spec;
}

Dataset synth_clusters(const SynthSpec& spec) {
  spec.validate();
  std::size_t total = 0;
  for (const ClusterSpec& c : spec.clusters) total += c.count;

  Dataset out;
  out.name = "synthetic";
  out.points = Matrix(total, spec.dim);
  out.labels.reserve(total);
  std::size_t row = 0;
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    const ClusterSpec& cl = spec.clusters[c];
    const RiemannianNormalParams params{PoincarePoint(cl.mean), cl.sigma};
    const Matrix draws = sample_riemannian_normal(params, cl.count, spec.seed, c);
    for (std::size_t i = 0; i < cl.count; ++i, ++row) {
      std::copy(draws.row(i).begin(), draws.row(i).end(), out.points.row(row).begin());
      out.labels.push_back(cl.label);
    }
  }
  return out;
}

}  // namespace hypembed

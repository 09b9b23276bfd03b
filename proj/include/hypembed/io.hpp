#pragma once

// CSV ingestion and persistence, synthetic cluster generation, SVG rendering.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hypembed/dataset.hpp"
#include "hypembed/geometry.hpp"
#include "hypembed/matrix.hpp"
#include "hypembed/optimizer.hpp"

namespace hypembed {

struct LoadResult {
  Dataset dataset;
  std::size_t clamped_rows = 0;  ///< rows rescaled into the ball
};

/// Reads one point per row. A header line is detected when its first field is
/// not numeric; a leading `id` column is skipped and a final `label` column is
/// read as labels. With the hyperbolic metric, points on or outside the ball
/// are clamped to norm 1 - eps; Euclidean data is read as is.
/// Throws DataError (with the line number) on malformed input.
LoadResult load_dataset(const std::filesystem::path& path, Metric metric = Metric::hyperbolic,
                        BallMargin margin = {});
LoadResult parse_dataset(const std::string& text, const std::string& name,
                         Metric metric = Metric::hyperbolic, BallMargin margin = {});

/// Shortest decimal text that round-trips the double ("%.17g" equivalent).
std::string format_double(double v);

/// Header `x0,...,x{d-1}[,label]`.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);

/// Header `id,y0,...,y{d-1}[,label]`; the loss trace goes to `<path>.trace.csv`
/// with header `iter,kl,dist,total`.
void write_embedding_csv(const EmbeddingResult& result, const std::filesystem::path& path);
std::filesystem::path trace_path_for(const std::filesystem::path& path);

/// Resolved configuration as JSON, for the `<path>.config.json` sidecar.
std::string config_json(const EmbeddingResult& result);

/// Writes a grid with a header row of hi values and a leading lo column.
void write_grid_csv(const Matrix& grid, const std::vector<double>& hi_values,
                    const std::vector<double>& lo_values, const std::filesystem::path& path);

struct ClusterSpec {
  std::vector<double> mean;
  double sigma = 1.0;
  std::size_t count = 20;
  std::string label;
};

struct SynthSpec {
  std::vector<ClusterSpec> clusters;
  std::size_t dim = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Five 5-D clusters of 20 points with sigma = 1 and means on distinct axes at
/// norms 0.1, 0.2, 0.9, 0.9 and 0.
SynthSpec five_cluster_preset(std::uint64_t seed);

/// Concatenated Riemannian-normal draws, one cluster after another, labelled.
Dataset synth_clusters(const SynthSpec& spec);

struct SvgOptions {
  /// Draw the unit circle (hyperbolic embeddings). Without it the points are
  /// scaled to fit the viewport.
  bool draw_boundary = true;
  std::string title;
};

inline constexpr int kSvgSize = 600;
inline constexpr double kSvgPointRadius = 3.0;

std::string render_svg(const Dataset& y, const SvgOptions& options = {});
void write_svg(const Dataset& y, const std::filesystem::path& path,
               const SvgOptions& options = {});

/// Writes text to path, throwing DataError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hypembed

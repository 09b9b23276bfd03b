#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hypembed/errors.hpp"
#include "hypembed/io.hpp"

namespace hypembed {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void fail_at(const std::string& name, std::size_t line, const std::string& msg) {
  throw DataError(name + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

LoadResult parse_dataset(const std::string& text, const std::string& name, Metric metric,
                         BallMargin margin) {
  LoadResult result;
  result.dataset.name = name;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool header_checked = false;
  bool skip_id = false;
  bool has_label = false;
  std::size_t dim = 0;
  std::vector<double> coords;
  std::vector<std::string> labels;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split_fields(line);

    if (!header_checked) {
      header_checked = true;
      double probe = 0.0;
      if (!parse_double(fields.front(), probe)) {
        skip_id = fields.front() == "id";
        has_label = fields.back() == "label";
        const std::size_t extra = (skip_id ? 1 : 0) + (has_label ? 1 : 0);
        if (fields.size() <= extra) fail_at(name, line_no, "header has no coordinate columns");
        dim = fields.size() - extra;
        continue;
      }
    }

    const std::size_t first = skip_id ? 1 : 0;
    const std::size_t expected_extra = first + (has_label ? 1 : 0);
    if (dim == 0) dim = fields.size() - expected_extra;
    if (fields.size() != dim + expected_extra) {
      fail_at(name, line_no,
              "expected " + std::to_string(dim + expected_extra) + " fields, found " +
                  std::to_string(fields.size()));
    }
    std::vector<double> point(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_double(fields[first + k], point[k]) || !std::isfinite(point[k])) {
        fail_at(name, line_no, "cannot parse '" + std::string(fields[first + k]) + "' as a number");
      }
    }
    if (metric == Metric::hyperbolic) {
      const double before = squared_norm(point);
      project_to_ball_inplace(point, margin);
      if (squared_norm(point) != before) ++result.clamped_rows;
    }
    coords.insert(coords.end(), point.begin(), point.end());
    if (has_label) labels.emplace_back(fields.back());
  }

  if (coords.empty()) throw DataError(name + ": no data rows");
  const std::size_t m = coords.size() / dim;
  result.dataset.points = Matrix(m, dim);
  std::copy(coords.begin(), coords.end(), result.dataset.points.data().begin());
  result.dataset.labels = std::move(labels);
  return result;
}

LoadResult load_dataset(const std::filesystem::path& path, Metric metric, BallMargin margin) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), path.string(), metric, margin);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  data.validate();
  std::string text;
  for (std::size_t k = 0; k < data.dim(); ++k) {
    if (k) text += ',';
    text += 'x' + std::to_string(k);
  }
  if (data.has_labels()) text += ",label";
  text += '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t k = 0; k < data.dim(); ++k) {
      if (k) text += ',';
      text += format_double(data.points(i, k));
    }
    if (data.has_labels()) text += ',' + data.labels[i];
    text += '\n';
  }
  write_text_file(path, text);
}

std::filesystem::path trace_path_for(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".trace.csv");
}

void write_embedding_csv(const EmbeddingResult& result, const std::filesystem::path& path) {
  const Dataset& y = result.embedding;
  y.validate();
  std::string text = "id";
  for (std::size_t k = 0; k < y.dim(); ++k) text += ",y" + std::to_string(k);
  if (y.has_labels()) text += ",label";
  text += '\n';
  for (std::size_t i = 0; i < y.size(); ++i) {
    text += std::to_string(i);
    for (std::size_t k = 0; k < y.dim(); ++k) text += ',' + format_double(y.points(i, k));
    if (y.has_labels()) text += ',' + y.labels[i];
    text += '\n';
  }
  write_text_file(path, text);

  std::string trace = "iter,kl,dist,total\n";
  for (std::size_t t = 0; t < result.loss_trace.size(); ++t) {
    const LossRecord& r = result.loss_trace[t];
    trace += std::to_string(t) + ',' + format_double(r.kl) + ',' + format_double(r.dist) + ',' +
             format_double(r.total) + '\n';
  }
  write_text_file(trace_path_for(path), trace);
}

std::string config_json(const EmbeddingResult& result) {
  const EmbedConfig& c = result.config;
  const nlohmann::ordered_json j = {
      {"mode", std::string(to_string(c.mode))},
      {"out_dim", c.out_dim},
      {"perplexity_requested", c.perplexity},
      {"perplexity_used", result.perplexity_used},
      {"gamma", c.gamma_scale},
      {"lambda1", c.lambda1},
      {"lambda2", c.lambda2},
      {"learning_rate", c.effective_learning_rate()},
      {"n_iter", c.n_iter},
      {"stage_boundary", c.stage_boundary},
      {"exaggeration", c.exaggeration},
      {"exaggeration_iters", c.exaggeration_iters},
      {"momentum_early", c.momentum_early},
      {"momentum_late", c.momentum_late},
      {"momentum_switch_iter", c.momentum_switch_iter},
      {"seed", c.seed},
      {"eps", c.eps.eps()},
      {"init_mean", c.init_mean},
      {"init_std", c.init_std},
      {"iterations_run", result.iterations_run},
  };
  return j.dump(2) + "\n";
}

void write_grid_csv(const Matrix& grid, const std::vector<double>& hi_values,
                    const std::vector<double>& lo_values, const std::filesystem::path& path) {
  std::string text = "lo\\hi";
  for (double h : hi_values) text += ',' + format_double(h);
  text += '\n';
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    text += format_double(lo_values[r]);
    for (std::size_t c = 0; c < grid.cols(); ++c) text += ',' + format_double(grid(r, c));
    text += '\n';
  }
  write_text_file(path, text);
}

}  // namespace hypembed

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hypembed/errors.hpp"
#include "hypembed/io.hpp"
#include "hypembed/metrics.hpp"
#include "hypembed/optimizer.hpp"

namespace hypembed::cli {

namespace {

namespace fs = std::filesystem;

const std::vector<double> kAblationLambda1 = {0.0, 5.0, 10.0, 15.0, 20.0};
const std::vector<double> kAblationLambda2 = {0.0, 0.01, 0.05, 0.1, 0.2};

struct EmbedFlags {
  std::string mode = "cosne";
  double gamma = 0.1;
  double lambda1 = 10.0;
  double lambda2 = 0.01;
  double perplexity = 30.0;
  double lr = 0.0;  // 0 = mode default
  int iters = 1000;
  int stage_boundary = 500;
  std::uint64_t seed = 0;
  double init_std = 1e-2;
  std::size_t out_dim = 2;
  double exaggeration = 12.0;
  int exaggeration_iters = 250;
  bool serial = false;

  EmbedConfig to_config() const {
    EmbedConfig c;
    c.mode = parse_mode(mode);
    c.gamma_scale = gamma;
    c.lambda1 = lambda1;
    c.lambda2 = lambda2;
    c.perplexity = perplexity;
    if (lr > 0.0) c.learning_rate = lr;
    c.n_iter = iters;
    c.stage_boundary = std::min(stage_boundary, iters);
    c.seed = seed;
    c.init_std = init_std;
    c.out_dim = out_dim;
    c.exaggeration = exaggeration;
    c.exaggeration_iters = exaggeration_iters;
    c.exec = serial ? Exec::serial : Exec::parallel;
    return c;
  }
};

void add_embed_options(CLI::App* cmd, EmbedFlags& f, bool include_lambdas) {
  cmd->add_option("--mode", f.mode, "cosne | htsne | tsne")
      ->check(CLI::IsMember({"cosne", "htsne", "tsne"}))
      ->capture_default_str();
  cmd->add_option("--gamma", f.gamma, "Cauchy scale of the low-dimensional kernel")
      ->capture_default_str();
  if (include_lambdas) {
    cmd->add_option("--lambda1", f.lambda1, "weight of the KL term")->capture_default_str();
    cmd->add_option("--lambda2", f.lambda2, "weight of the distance loss")->capture_default_str();
  }
  cmd->add_option("--perplexity", f.perplexity)->capture_default_str();
  cmd->add_option("--lr", f.lr, "learning rate (default: 0.01 hyperbolic, 20 tsne)");
  cmd->add_option("--iters", f.iters)->capture_default_str();
  cmd->add_option("--stage-boundary", f.stage_boundary,
                  "iteration at which the distance loss is switched on")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed)->envname("HYPEMBED_SEED")->capture_default_str();
  cmd->add_option("--init-std", f.init_std, "std of the initial embedding")
      ->capture_default_str();
  cmd->add_option("--out-dim", f.out_dim)->capture_default_str();
  cmd->add_option("--exaggeration", f.exaggeration)->capture_default_str();
  cmd->add_option("--exaggeration-iters", f.exaggeration_iters)->capture_default_str();
  cmd->add_flag("--serial", f.serial, "use the serial reference kernels");
}

LoadResult load_input(const std::string& path, const EmbedConfig& cfg, std::ostream& err) {
  LoadResult loaded = load_dataset(path, cfg.resolved().metric());
  if (loaded.clamped_rows > 0) {
    err << "warning: " << loaded.clamped_rows << " row(s) of " << path
        << " were clamped into the Poincare ball\n";
  }
  return loaded;
}

SvgOptions svg_options(const EmbedConfig& cfg, std::string title) {
  SvgOptions o;
  o.draw_boundary = cfg.resolved().metric() == Metric::hyperbolic;
  o.title = std::move(title);
  return o;
}

int run_synth(const std::string& preset, const std::string& out_path, std::uint64_t seed,
              double sigma, std::size_t count, std::ostream& out) {
  if (preset != "paper-4.1") throw ConfigError("unknown preset '" + preset + "'");
  SynthSpec spec = five_cluster_preset(seed);
  for (ClusterSpec& c : spec.clusters) {
    if (sigma > 0.0) c.sigma = sigma;
    if (count > 0) c.count = count;
  }
  const Dataset data = synth_clusters(spec);
  write_dataset_csv(data, out_path);
  out << "wrote " << data.size() << " points (dim " << data.dim() << ") to " << out_path << "\n";
  return kExitOk;
}

int run_embed(const std::string& input, const EmbedFlags& flags, const std::string& out_path,
              const std::string& svg_path, std::ostream& out, std::ostream& err) {
  const EmbedConfig cfg = flags.to_config();
  for (const std::string& w : cfg.warnings()) err << "warning: " << w << "\n";
  const LoadResult loaded = load_input(input, cfg, err);
  const EmbeddingResult result = run_embedding(loaded.dataset, cfg);
  write_embedding_csv(result, out_path);
  write_text_file(out_path + ".config.json", config_json(result));
  if (!svg_path.empty()) {
    write_svg(result.embedding, svg_path, svg_options(cfg, result.embedding.name));
  }
  const LossRecord& last = result.loss_trace.back();
  out << "embedded " << result.embedding.size() << " points in " << result.iterations_run
      << " iterations; kl " << format_double(last.kl) << " dist " << format_double(last.dist)
      << "\n";
  return kExitOk;
}

int run_metrics(const std::string& hi_path, const std::string& lo_path, const EmbedFlags& flags,
                std::size_t k, const std::string& json_path, std::ostream& out,
                std::ostream& err) {
  const EmbedConfig cfg = flags.to_config();
  const Dataset hi = load_input(hi_path, cfg, err).dataset;
  const Dataset lo = load_input(lo_path, cfg, err).dataset;
  const QualityReport report = quality_report(hi, lo, cfg, k);
  out << to_key_value(report);
  if (!json_path.empty()) write_text_file(json_path, to_json(report));
  return kExitOk;
}

int run_gradfield(const std::string& mode_name, const ForceFieldParams& params, FieldRange hi,
                  FieldRange lo, std::size_t resolution, const std::string& out_path,
                  std::ostream& out) {
  const Mode mode = parse_mode(mode_name);
  const Matrix grid = gradient_field_grid(mode, params, hi, lo, resolution);
  std::vector<double> hi_values(resolution), lo_values(resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    hi_values[i] = field_coordinate(hi, i, resolution);
    lo_values[i] = field_coordinate(lo, i, resolution);
  }
  write_grid_csv(grid, hi_values, lo_values, out_path);
  out << "wrote " << resolution << "x" << resolution << " " << mode_name
      << " gradient field to " << out_path << "\n";
  return kExitOk;
}

// Grid values are short decimals; %g keeps them readable in file names.
std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string cell_name(double l1, double l2) {
  return "l1_" + short_number(l1) + "_l2_" + short_number(l2);
}

int run_ablate(const std::string& input, const EmbedFlags& flags, const std::string& out_dir,
               std::ostream& out, std::ostream& err) {
  const Dataset data = load_input(input, flags.to_config(), err).dataset;
  fs::create_directories(out_dir);
  const std::size_t n1 = kAblationLambda1.size();
  const std::size_t n2 = kAblationLambda2.size();
  std::vector<QualityReport> reports(n1 * n2);
  std::vector<std::string> failures(n1 * n2);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t cell = 0; cell < static_cast<std::ptrdiff_t>(n1 * n2); ++cell) {
    const auto c = static_cast<std::size_t>(cell);
    EmbedConfig cfg = flags.to_config();
    cfg.lambda1 = kAblationLambda1[c / n2];
    cfg.lambda2 = kAblationLambda2[c % n2];
    cfg.exec = Exec::serial;
    try {
      const EmbeddingResult result = run_embedding(data, cfg);
      const std::string name = cell_name(cfg.lambda1, cfg.lambda2);
      write_svg(result.embedding, fs::path(out_dir) / (name + ".svg"), svg_options(cfg, name));
      reports[c] = quality_report(data, result.embedding, cfg);
    } catch (const std::exception& e) {
      failures[c] = e.what();
    }
  }

  std::string summary = "lambda1,lambda2,knn_preservation,norm_rmse,purity_at_k,final_kl,"
                        "final_dist_loss\n";
  for (std::size_t c = 0; c < n1 * n2; ++c) {
    if (!failures[c].empty()) throw DataError("ablation cell failed: " + failures[c]);
    const QualityReport& r = reports[c];
    summary += short_number(kAblationLambda1[c / n2]) + ',' +
               short_number(kAblationLambda2[c % n2]) + ',' + format_double(r.knn_preservation) +
               ',' + format_double(r.norm_rmse) + ',' + format_double(r.purity_at_k) + ',' +
               format_double(r.final_kl) + ',' + format_double(r.final_dist_loss) + '\n';
  }
  write_text_file(fs::path(out_dir) / "summary.csv", summary);
  out << "wrote " << n1 * n2 << " ablation cells to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperbolic stochastic neighbor embedding (cosne, htsne and tsne modes)", "hypembed"};
  app.require_subcommand(1);

  // synth
  std::string preset;
  std::string synth_out;
  std::uint64_t synth_seed = 0;
  double synth_sigma = 0.0;
  std::size_t synth_count = 0;
  CLI::App* synth = app.add_subcommand("synth", "write a synthetic hyperbolic cluster dataset");
  synth->add_option("--preset", preset, "dataset preset")
      ->required()
      ->check(CLI::IsMember({"paper-4.1"}));
  synth->add_option("--out", synth_out, "output CSV")->required();
  synth->add_option("--seed", synth_seed)->envname("HYPEMBED_SEED")->capture_default_str();
  synth->add_option("--sigma", synth_sigma, "override the cluster dispersion");
  synth->add_option("--count", synth_count, "override the points per cluster");

  // embed
  EmbedFlags embed_flags;
  std::string embed_input, embed_out, embed_svg;
  CLI::App* embed = app.add_subcommand("embed", "embed a CSV dataset into a low-dimensional ball");
  embed->add_option("input", embed_input, "input CSV")->required();
  embed->add_option("--out", embed_out, "output embedding CSV")->required();
  embed->add_option("--svg", embed_svg, "optional SVG rendering (2-D only)");
  add_embed_options(embed, embed_flags, true);

  // metrics
  EmbedFlags metric_flags;
  std::string hi_path, lo_path, json_path;
  std::size_t k = kDefaultNeighbors;
  CLI::App* metrics = app.add_subcommand("metrics", "quality report for an embedding");
  metrics->add_option("high", hi_path, "high-dimensional CSV")->required();
  metrics->add_option("low", lo_path, "low-dimensional CSV")->required();
  metrics->add_option("--mode", metric_flags.mode)
      ->check(CLI::IsMember({"cosne", "htsne", "tsne"}))
      ->capture_default_str();
  metrics->add_option("--gamma", metric_flags.gamma)->capture_default_str();
  metrics->add_option("--perplexity", metric_flags.perplexity)->capture_default_str();
  metrics->add_option("--k", k)->capture_default_str();
  metrics->add_option("--json", json_path, "also write the report as JSON");

  // gradfield
  std::string field_mode = "cosne";
  ForceFieldParams field_params;
  FieldRange hi_range, lo_range;
  std::size_t resolution = 50;
  std::string field_out;
  CLI::App* gradfield =
      app.add_subcommand("gradfield", "isolated-pair force as a function of distances");
  gradfield->add_option("--mode", field_mode)
      ->check(CLI::IsMember({"cosne", "htsne", "tsne"}))
      ->capture_default_str();
  gradfield->add_option("--gamma", field_params.gamma_scale)->capture_default_str();
  gradfield->add_option("--sigma", field_params.sigma)->capture_default_str();
  gradfield->add_flag("--matched", field_params.matched_kernels,
                      "use the high-dimensional normal on both sides");
  gradfield->add_option("--hi-min", hi_range.min)->capture_default_str();
  gradfield->add_option("--hi-max", hi_range.max)->capture_default_str();
  gradfield->add_option("--lo-min", lo_range.min)->capture_default_str();
  gradfield->add_option("--lo-max", lo_range.max)->capture_default_str();
  gradfield->add_option("--resolution", resolution)->capture_default_str();
  gradfield->add_option("--out", field_out, "output grid CSV")->required();

  // ablate
  EmbedFlags ablate_flags;
  std::string ablate_input, ablate_dir;
  CLI::App* ablate =
      app.add_subcommand("ablate", "lambda1 x lambda2 grid, one SVG per cell plus summary.csv");
  ablate->add_option("input", ablate_input, "input CSV")->required();
  ablate->add_option("--out-dir", ablate_dir, "output directory")->required();
  add_embed_options(ablate, ablate_flags, false);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth) return run_synth(preset, synth_out, synth_seed, synth_sigma, synth_count, out);
    if (*embed) return run_embed(embed_input, embed_flags, embed_out, embed_svg, out, err);
    if (*metrics) return run_metrics(hi_path, lo_path, metric_flags, k, json_path, out, err);
    if (*gradfield) {
      return run_gradfield(field_mode, field_params, hi_range, lo_range, resolution, field_out,
                           out);
    }
    if (*ablate) return run_ablate(ablate_input, ablate_flags, ablate_dir, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace hypembed::cli

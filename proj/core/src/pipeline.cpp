#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include "hawe/evalharness.hpp"

namespace hawe {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

Matrix context_embeddings(const EmbeddingModel& model, const Corpus& corpus) {
  Matrix out(corpus.num_contexts(), model.dim);
  for (std::size_t r = 0; r < corpus.num_contexts(); ++r) {
    const auto z = model.node_vectors.row(corpus.nodes[r]);
    std::copy(z.begin(), z.end(), out.row(r).begin());
  }
  return out;
}

PipelineResult run_pipeline(const HeteroGraph& graph, std::span<const std::int32_t> labels,
                            const PipelineConfig& config) {
  if (!labels.empty() && labels.size() != graph.num_nodes()) {
    throw std::invalid_argument("label vector must cover every graph node");
  }
  PipelineResult result;
  auto t0 = Clock::now();
  std::tie(result.corpus, result.lexicon) = build_corpus(graph, config.corpus);
  result.corpus_seconds = seconds_since(t0);

  t0 = Clock::now();
  result.model = train(result.corpus, result.lexicon, config.train);
  result.train_seconds = seconds_since(t0);

  result.embeddings = context_embeddings(result.model, result.corpus);
  if (!labels.empty()) {
    result.labels.reserve(result.corpus.num_contexts());
    for (NodeId v : result.corpus.nodes) result.labels.push_back(labels[v]);
    result.report = classify(result.embeddings, result.labels, config.eval);
  }
  return result;
}

SweepParam parse_sweep_param(std::string_view text) {
  if (text == "L" || text == "walk-length") return SweepParam::WalkLength;
  if (text == "T" || text == "samples") return SweepParam::Samples;
  if (text == "d" || text == "dim") return SweepParam::Dim;
  const std::string s = lower(text);
  if (s == "window" || s == "delta") return SweepParam::Window;
  throw std::invalid_argument("unknown sweep parameter '" + std::string(text) +
                              "' (expected L, T, d or window)");
}

std::string_view to_string(SweepParam param) {
  switch (param) {
    case SweepParam::WalkLength: return "L";
    case SweepParam::Samples: return "T";
    case SweepParam::Dim: return "d";
    case SweepParam::Window: return "window";
  }
  return "?";
}

std::vector<SweepRow> sweep(SweepParam param, std::span<const std::uint32_t> values,
                            const PipelineConfig& base, const HeteroGraph& graph,
                            std::span<const std::int32_t> labels) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  if (labels.empty()) throw std::invalid_argument("sweep needs class labels");
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (std::uint32_t value : values) {
    PipelineConfig cfg = base;
    switch (param) {
      case SweepParam::WalkLength: cfg.corpus.walk_length = value; break;
      case SweepParam::Samples: cfg.corpus.samples = value; break;
      case SweepParam::Dim: cfg.train.dim = value; break;
      case SweepParam::Window: cfg.train.window = value; break;
    }
    const PipelineResult res = run_pipeline(graph, labels, cfg);
    rows.push_back({value, res.report.mean_accuracy, res.lexicon.size()});
  }
  return rows;
}

void write_sweep(SweepParam param, std::span<const SweepRow> rows,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_string(param) << "\tmean_accuracy\tlexicon_size\n";
  char buf[32];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.mean_accuracy);
    out << r.value << '\t' << buf << '\t' << r.lexicon_size << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

GraphFamily parse_graph_family(std::string_view text) {
  const std::string s = lower(text);
  if (s == "er") return GraphFamily::ER;
  if (s == "ba") return GraphFamily::BA;
  throw std::invalid_argument("unknown graph family '" + std::string(text) + "' (expected er or ba)");
}

std::string_view to_string(GraphFamily family) {
  return family == GraphFamily::ER ? "er" : "ba";
}

std::vector<BenchRow> bench_runtime(std::span<const std::uint32_t> sizes, GraphFamily family,
                                    const BenchConfig& config) {
  if (sizes.empty()) throw std::invalid_argument("bench needs at least one size");
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw std::invalid_argument("bench sizes must be ascending");
  }
  if (config.runs < 1) throw std::invalid_argument("bench runs must be >= 1");

  std::vector<BenchRow> rows;
  for (std::uint32_t n : sizes) {
    const HeteroGraph graph =
        family == GraphFamily::ER
            ? gen_er(n, std::min(1.0, config.er_mean_degree / static_cast<double>(n)),
                     config.num_types, config.graph_seed)
            : gen_ba(n, config.ba_edges, config.num_types, config.graph_seed);
    BenchRow row;
    row.nodes = n;
    row.edges = graph.num_edges();
    for (std::uint32_t run = 0; run < config.runs; ++run) {
      auto t0 = Clock::now();
      auto [corpus, lexicon] = build_corpus(graph, config.corpus);
      row.corpus_seconds += seconds_since(t0);
      t0 = Clock::now();
      const EmbeddingModel model = train(corpus, lexicon, config.train);
      row.train_seconds += seconds_since(t0);
      row.lexicon_size = lexicon.size();
    }
    row.corpus_seconds /= config.runs;
    row.train_seconds /= config.runs;
    row.seconds = row.corpus_seconds + row.train_seconds;
    rows.push_back(row);
  }
  return rows;
}

void write_bench(std::span<const BenchRow> rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "n\tedges\tseconds\tcorpus_seconds\ttrain_seconds\tlexicon_size\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f\t%.6f\t%.6f", r.seconds, r.corpus_seconds,
                  r.train_seconds);
    out << r.nodes << '\t' << r.edges << '\t' << buf << '\t' << r.lexicon_size << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs at least two paired points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("log-log fit needs positive values");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("log-log fit needs distinct x values");
  return sxy / sxx;
}

}  // namespace hawe

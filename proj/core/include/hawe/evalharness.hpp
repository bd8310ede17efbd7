#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hawe/corpus.hpp"
#include "hawe/hetgraph.hpp"
#include "hawe/matrix.hpp"
#include "hawe/pvdm.hpp"

namespace hawe {

// ---- Role classification -------------------------------------------------

struct ClassifyConfig {
  double train_frac = 0.7;
  std::uint32_t repeats = 50;
  std::uint64_t seed = 1;
  double l2 = 1e-4;
  std::uint32_t max_iters = 500;
  double grad_tol = 1e-6;
};

struct EvalReport {
  std::string task;
  std::vector<double> accuracies;  ///< one per repeat
  double mean_accuracy = 0.0;
  std::vector<std::pair<std::string, std::string>> config;  ///< echoed settings

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Repeated stratified train/test splits with multinomial logistic
/// regression (L2-penalized, full-batch gradient descent on standardized
/// features). Rows whose label is kNoLabel are ignored. Requires at least
/// two classes with at least two rows each.
EvalReport classify(const Matrix& embeddings, std::span<const std::int32_t> labels,
                    const ClassifyConfig& config = {});

/// Fitted softmax regression: weights is (features + 1) x classes, last row
/// holding the intercepts. Inputs are standardized with mean/scale first.
struct SoftmaxModel {
  std::vector<double> mean;
  std::vector<double> scale;
  Matrix weights;
  std::uint32_t iterations = 0;
  double final_grad_norm = 0.0;

  std::int32_t predict(std::span<const double> x) const;
};

SoftmaxModel fit_softmax(const Matrix& features, std::span<const std::int32_t> labels,
                         std::int32_t num_classes, const ClassifyConfig& config);

/// Leave-one-out 1-nearest-neighbour accuracy (Euclidean, ties by row).
double one_nn_accuracy(const Matrix& embeddings, std::span<const std::int32_t> labels);

// ---- Similarity search ---------------------------------------------------

struct Neighbor {
  std::size_t row = 0;
  std::string id;
  double distance = 0.0;
};

struct NeighborList {
  std::string target;
  std::vector<Neighbor> neighbors;  ///< ascending distance, ties by row
};

/// Exact k nearest rows to `target` by Euclidean distance, excluding the
/// target itself. Requires k < rows.
NeighborList topk_search(const Matrix& embeddings, std::span<const std::string> ids,
                         std::size_t target, std::size_t k);
/// Looks the target up by raw id; throws InputError when unknown.
NeighborList topk_search(const EmbeddingTable& table, std::string_view target, std::size_t k);

void write_neighbors(const NeighborList& list, const std::filesystem::path& path);

// ---- Reports -------------------------------------------------------------

/// TSV with a "# key=value" header block, one "repeat<TAB>accuracy" row per
/// repeat, and a final "mean" row.
void write_report(const EvalReport& report, const std::filesystem::path& path);
std::string summarize(const EvalReport& report);

// ---- Pipeline, sweeps and benchmarks ---------------------------------------

struct PipelineConfig {
  CorpusConfig corpus;
  TrainConfig train;
  ClassifyConfig eval;
};

struct PipelineResult {
  Corpus corpus;
  Lexicon lexicon;
  EmbeddingModel model;
  Matrix embeddings;                 ///< one row per corpus node
  std::vector<std::int32_t> labels;  ///< labels of those rows
  EvalReport report;
  double corpus_seconds = 0.0;
  double train_seconds = 0.0;
};

/// Rows of the model's node matrix for the nodes that own a context.
Matrix context_embeddings(const EmbeddingModel& model, const Corpus& corpus);

/// build_corpus -> train -> (classify when `labels` is non-empty).
PipelineResult run_pipeline(const HeteroGraph& graph, std::span<const std::int32_t> labels,
                            const PipelineConfig& config);

enum class SweepParam { WalkLength, Samples, Dim, Window };

/// Accepts "L", "T", "d", "window" (or "delta").
SweepParam parse_sweep_param(std::string_view text);
std::string_view to_string(SweepParam param);

struct SweepRow {
  std::uint32_t value = 0;
  double mean_accuracy = 0.0;
  std::size_t lexicon_size = 0;
};

/// Runs the full pipeline once per value with the other settings fixed.
std::vector<SweepRow> sweep(SweepParam param, std::span<const std::uint32_t> values,
                            const PipelineConfig& base, const HeteroGraph& graph,
                            std::span<const std::int32_t> labels);

void write_sweep(SweepParam param, std::span<const SweepRow> rows,
                 const std::filesystem::path& path);

enum class GraphFamily { ER, BA };
GraphFamily parse_graph_family(std::string_view text);
std::string_view to_string(GraphFamily family);

struct BenchConfig {
  CorpusConfig corpus;
  TrainConfig train;
  std::uint32_t runs = 5;
  double er_mean_degree = 10.0;  ///< ER edge probability is er_mean_degree / n
  std::uint32_t ba_edges = 1;
  std::uint32_t num_types = 2;
  std::uint64_t graph_seed = 1;
};

struct BenchRow {
  std::uint32_t nodes = 0;
  std::uint64_t edges = 0;
  std::size_t lexicon_size = 0;
  double corpus_seconds = 0.0;  ///< mean over runs
  double train_seconds = 0.0;   ///< mean over runs
  double seconds = 0.0;         ///< mean end-to-end (corpus + train)
};

/// Times corpus construction plus training on generated graphs. Sizes must
/// be ascending.
std::vector<BenchRow> bench_runtime(std::span<const std::uint32_t> sizes, GraphFamily family,
                                    const BenchConfig& config);

void write_bench(std::span<const BenchRow> rows, const std::filesystem::path& path);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace hawe

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hawe/corpus.hpp"
#include "hawe/matrix.hpp"

namespace hawe {

/// Frequency-weighted binary tree over the lexicon for hierarchical softmax.
///
/// Internal nodes are numbered in creation order, so the root is the last
/// one. For every leaf, `paths[leaf]` lists the internal nodes from the root
/// down and `codes[leaf]` the branch taken at each (0 = first-merged child).
struct HuffmanTree {
  std::vector<std::vector<std::uint8_t>> codes;
  std::vector<std::vector<std::uint32_t>> paths;

  std::size_t num_leaves() const noexcept { return codes.size(); }
  std::size_t num_internal() const noexcept { return codes.empty() ? 0 : codes.size() - 1; }
  std::size_t code_length(TokenId leaf) const { return codes[leaf].size(); }

  friend bool operator==(const HuffmanTree&, const HuffmanTree&) = default;
};

/// Ties between equal frequencies are broken by token id (leaves) and then by
/// creation order (internal nodes). Throws std::invalid_argument when empty.
HuffmanTree build_huffman(std::span<const std::uint64_t> frequencies);
inline HuffmanTree build_huffman(const Lexicon& lexicon) {
  return build_huffman(lexicon.frequencies());
}

struct TrainConfig {
  std::uint32_t dim = 128;    ///< d
  std::uint32_t window = 5;   ///< context half-width
  std::uint32_t epochs = 100;
  double lr_start = 0.025;
  double lr_end = 0.0001;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Single-threaded and bit-reproducible. When false and threads > 1,
  /// workers update shared parameters without synchronization.
  bool deterministic = true;
  /// One ascent step per epoch on the exact full-corpus gradient instead of
  /// per-window SGD. Meant for small corpora and diagnostics.
  bool full_batch = false;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// Node vectors, token vectors and one binary classifier (weights over the
/// 2d-dimensional input [sum of context vectors, node vector] plus a bias)
/// per internal node of the Huffman tree.
struct EmbeddingModel {
  std::uint32_t dim = 0;
  std::uint32_t window = 0;
  WalkMode mode = WalkMode::HAW;
  std::uint32_t walk_length = 0;
  std::uint32_t samples = 0;

  Matrix node_vectors;    ///< num_nodes x d; rows of isolated nodes stay zero
  Matrix token_vectors;   ///< |lexicon| x d
  Matrix inner_weights;   ///< (|lexicon| - 1) x 2d
  std::vector<double> inner_bias;
  HuffmanTree tree;

  std::size_t num_tokens() const noexcept { return token_vectors.rows(); }
  bool all_finite() const;

  friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;
};

/// Allocates a model for the corpus: node and token vectors uniform in
/// [-0.5/d, 0.5/d], classifier weights and biases zero.
EmbeddingModel init_model(const Corpus& corpus, const Lexicon& lexicon, const TrainConfig& config);

// ---- Forward pass ----------------------------------------------------------

/// [sum of context token vectors, node vector], length 2d.
std::vector<double> pooled_input(const EmbeddingModel& model, std::span<const TokenId> context,
                                 NodeId node);

/// Unnormalized score y(target) = b + u.[w_sum, z_node], where (u, b) is the
/// signed sum of the classifiers along the target's tree path (+ for code 0,
/// - for code 1). Invariant to the order of `context`.
double score(const EmbeddingModel& model, std::span<const TokenId> context, NodeId node,
             TokenId target);

/// log p(target | context, node) through the hierarchical softmax: the sum of
/// log sigma(+-s_n) over the target's path. Zero for a one-token lexicon.
double token_log_prob(const EmbeddingModel& model, std::span<const TokenId> context, NodeId node,
                      TokenId target);

/// Context tokens of position t: t-window .. t+window without t itself.
std::vector<TokenId> window_context(const Corpus& corpus, std::size_t row, std::uint32_t t,
                                    std::uint32_t window);

/// log p(w_t | window, z_node) for an interior position
/// window <= t <= T - window - 1; throws std::invalid_argument otherwise.
double window_log_prob(const EmbeddingModel& model, const Corpus& corpus, NodeId node,
                       std::uint32_t t);

/// Training objective: (1 / (|V| T)) * sum over nodes and interior positions
/// of window_log_prob, |V| counting nodes that own a context.
double objective(const EmbeddingModel& model, const Corpus& corpus);

/// Average window_log_prob over all interior positions.
double mean_log_likelihood(const EmbeddingModel& model, const Corpus& corpus);

// ---- Gradients -------------------------------------------------------------

/// Dense gradient buffer with the model's parameter shapes.
struct ModelGradient {
  Matrix node_vectors;
  Matrix token_vectors;
  Matrix inner_weights;
  std::vector<double> inner_bias;

  explicit ModelGradient(const EmbeddingModel& model);
  void clear();
};

/// Adds scale * d log p(target | context, node) / d theta into `grad`.
void accumulate_gradient(const EmbeddingModel& model, std::span<const TokenId> context,
                         NodeId node, TokenId target, double scale, ModelGradient& grad);

struct GradCheckResult {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::size_t parameters_checked = 0;
};

/// Compares accumulate_gradient against central differences of
/// window_log_prob for every parameter that the window touches: the node row,
/// the context token rows, and the classifiers on the target path.
/// Relative error is |a - n| / max(|a|, |n|, 1e-6). epsilon in [1e-7, 1e-3].
GradCheckResult grad_check(const EmbeddingModel& model, const Corpus& corpus, NodeId node,
                           std::uint32_t t, double epsilon = 1e-5);

// ---- Training --------------------------------------------------------------

struct EpochReport {
  std::uint32_t epoch = 0;  ///< 1-based
  double learning_rate = 0.0;
};

using EpochCallback = std::function<void(const EpochReport&, const EmbeddingModel&)>;

/// Maximizes the windowed log-likelihood with SGD (or full-batch ascent).
/// Throws std::invalid_argument when T <= 2 * window or the corpus is empty.
EmbeddingModel train(const Corpus& corpus, const Lexicon& lexicon, const TrainConfig& config,
                     const EpochCallback& on_epoch = {});

/// Continues training an initialized model in place.
void train_model(EmbeddingModel& model, const Corpus& corpus, const TrainConfig& config,
                 const EpochCallback& on_epoch = {});

// ---- IO --------------------------------------------------------------------

/// TSV: a "# dim=.. mode=.. walk_length=.. samples=.. window=.." header, then
/// raw id and d values ("%.9g") for every node that owns a context.
void export_embeddings(const EmbeddingModel& model, const Corpus& corpus,
                       std::span<const std::string> raw_ids, const std::filesystem::path& path);

struct EmbeddingTable {
  std::uint32_t dim = 0;
  std::string mode;
  std::uint32_t walk_length = 0;
  std::uint32_t samples = 0;
  std::uint32_t window = 0;
  std::vector<std::string> ids;
  Matrix values;  ///< ids.size() x dim
};

EmbeddingTable load_embeddings(const std::filesystem::path& path);

inline constexpr std::uint32_t kModelFormatVersion = 1;
void save_model(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel load_model(const std::filesystem::path& path);

}  // namespace hawe

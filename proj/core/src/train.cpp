#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "hawe/pvdm.hpp"
#include "hawe/random.hpp"

namespace hawe {

namespace {

double fast_sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

/// Scratch space for one worker's SGD steps.
struct StepBuffers {
  std::vector<double> x;
  std::vector<double> e;
  explicit StepBuffers(std::size_t d) : x(2 * d), e(2 * d) {}
};

/// One stochastic ascent step on log p(target | window, node).
void sgd_step(EmbeddingModel& model, std::span<const TokenId> tokens, std::uint32_t t,
              std::uint32_t window, NodeId node, double lr, StepBuffers& buf) {
  const std::size_t d = model.dim;
  double* x = buf.x.data();
  double* e = buf.e.data();
  std::fill(buf.x.begin(), buf.x.end(), 0.0);
  std::fill(buf.e.begin(), buf.e.end(), 0.0);

  const std::uint32_t lo = t - window;
  const std::uint32_t hi = t + window;
  for (std::uint32_t j = lo; j <= hi; ++j) {
    if (j == t) continue;
    const double* w = model.token_vectors.row(tokens[j]).data();
    for (std::size_t i = 0; i < d; ++i) x[i] += w[i];
  }
  double* z = model.node_vectors.row(node).data();
  std::copy(z, z + d, x + d);

  const TokenId target = tokens[t];
  const auto& path = model.tree.paths[target];
  const auto& code = model.tree.codes[target];
  for (std::size_t k = 0; k < path.size(); ++k) {
    double* u = model.inner_weights.row(path[k]).data();
    double& b = model.inner_bias[path[k]];
    double s = b;
    for (std::size_t i = 0; i < 2 * d; ++i) s += u[i] * x[i];
    const double g = lr * ((1.0 - code[k]) - fast_sigmoid(s));
    for (std::size_t i = 0; i < 2 * d; ++i) e[i] += g * u[i];
    for (std::size_t i = 0; i < 2 * d; ++i) u[i] += g * x[i];
    b += g;
  }

  for (std::size_t i = 0; i < d; ++i) z[i] += e[d + i];
  for (std::uint32_t j = lo; j <= hi; ++j) {
    if (j == t) continue;
    double* w = model.token_vectors.row(tokens[j]).data();
    for (std::size_t i = 0; i < d; ++i) w[i] += e[i];
  }
}

double learning_rate(const TrainConfig& cfg, std::uint64_t done, std::uint64_t total) {
  const double frac = total ? static_cast<double>(done) / static_cast<double>(total) : 0.0;
  return std::max(cfg.lr_end, cfg.lr_start - (cfg.lr_start - cfg.lr_end) * frac);
}

void full_batch_epoch(EmbeddingModel& model, const Corpus& corpus, double lr, ModelGradient& grad) {
  grad.clear();
  const double scale = 1.0 / (static_cast<double>(corpus.num_contexts()) * corpus.samples);
  for (std::size_t row = 0; row < corpus.num_contexts(); ++row) {
    const NodeId node = corpus.nodes[row];
    for (std::uint32_t t = model.window; t + model.window < corpus.samples; ++t) {
      const auto ctx = window_context(corpus, row, t, model.window);
      accumulate_gradient(model, ctx, node, corpus.context(row)[t], scale, grad);
    }
  }
  auto axpy = [lr](std::vector<double>& p, const std::vector<double>& g) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += lr * g[i];
  };
  axpy(model.node_vectors.data(), grad.node_vectors.data());
  axpy(model.token_vectors.data(), grad.token_vectors.data());
  axpy(model.inner_weights.data(), grad.inner_weights.data());
  axpy(model.inner_bias, grad.inner_bias);
}

}  // namespace

void train_model(EmbeddingModel& model, const Corpus& corpus, const TrainConfig& config,
                 const EpochCallback& on_epoch) {
  config.validate();
  if (corpus.num_contexts() == 0) throw std::invalid_argument("empty corpus");
  if (corpus.samples <= 2 * config.window) {
    throw std::invalid_argument("samples per node T = " + std::to_string(corpus.samples) +
                                " leaves no interior position for window " +
                                std::to_string(config.window) + " (need T > 2 * window)");
  }
  if (model.node_vectors.rows() != corpus.num_nodes || model.dim != config.dim) {
    throw std::invalid_argument("model shape does not match corpus/config");
  }
  model.window = config.window;

  const std::size_t rows = corpus.num_contexts();
  const std::uint32_t first = config.window;
  const std::uint32_t span = corpus.samples - 2 * config.window;
  const std::uint64_t total = static_cast<std::uint64_t>(config.epochs) * rows * span;

  if (config.full_batch) {
    ModelGradient grad(model);
    for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
      const double lr = learning_rate(config, epoch, config.epochs);
      full_batch_epoch(model, corpus, lr, grad);
      if (on_epoch) on_epoch({epoch + 1, lr}, model);
    }
    return;
  }

  const unsigned workers =
      config.deterministic ? 1u : std::clamp<unsigned>(config.threads, 1u, 1024u);
  std::vector<std::size_t> order(rows);
  std::atomic<std::uint64_t> processed{0};

  auto run_shard = [&](std::uint32_t epoch, unsigned w, std::size_t begin, std::size_t end) {
    Rng rng(derive_seed(config.seed, (static_cast<std::uint64_t>(epoch) << 20) + w + 1));
    StepBuffers buf(model.dim);
    std::vector<std::uint32_t> positions(span);
    std::uint64_t local = processed.load(std::memory_order_relaxed);
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t row = order[i];
      const NodeId node = corpus.nodes[row];
      const auto tokens = corpus.context(row);
      std::iota(positions.begin(), positions.end(), first);
      rng.shuffle(positions.begin(), positions.end());
      for (std::uint32_t t : positions) {
        const double lr = learning_rate(config, local, total);
        sgd_step(model, tokens, t, config.window, node, lr, buf);
        ++local;
      }
      if (workers > 1) {
        local = processed.fetch_add(span, std::memory_order_relaxed) + span;
      }
    }
    if (workers == 1) processed.store(local, std::memory_order_relaxed);
  };

  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(epoch) << 20));
    rng.shuffle(order.begin(), order.end());

    if (workers == 1) {
      run_shard(epoch, 0, 0, rows);
    } else {
      // Hogwild: shards share the parameter matrices without locking.
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = rows * w / workers;
        const std::size_t end = rows * (w + 1) / workers;
        pool.emplace_back(run_shard, epoch, w, begin, end);
      }
      for (auto& th : pool) th.join();
    }
    if (on_epoch) {
      on_epoch({epoch + 1, learning_rate(config, processed.load(), total)}, model);
    }
  }
}

EmbeddingModel train(const Corpus& corpus, const Lexicon& lexicon, const TrainConfig& config,
                     const EpochCallback& on_epoch) {
  EmbeddingModel model = init_model(corpus, lexicon, config);
  train_model(model, corpus, config, on_epoch);
  return model;
}

}  // namespace hawe

#include "hawe/pvdm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawe/random.hpp"

namespace hawe {

namespace {

double log_sigmoid(double s) {
  return s >= 0.0 ? -std::log1p(std::exp(-s)) : s - std::log1p(std::exp(s));
}

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

void check_ids(const EmbeddingModel& model, std::span<const TokenId> context, NodeId node) {
  if (node >= model.node_vectors.rows()) throw std::out_of_range("node id out of range");
  for (TokenId t : context) {
    if (t >= model.num_tokens()) throw std::out_of_range("context token id out of range");
  }
}

std::size_t checked_row(const Corpus& corpus, NodeId node) {
  auto row = corpus.row_of(node);
  if (!row) throw std::invalid_argument("node " + std::to_string(node) + " has no context");
  return *row;
}

}  // namespace

void TrainConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("embedding dimension must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(lr_end > 0.0)) throw std::invalid_argument("lr_end must be > 0");
  if (!(lr_start >= lr_end)) throw std::invalid_argument("lr_start must be >= lr_end");
}

bool EmbeddingModel::all_finite() const {
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(node_vectors.data()) && finite(token_vectors.data()) &&
         finite(inner_weights.data()) && finite(inner_bias);
}

EmbeddingModel init_model(const Corpus& corpus, const Lexicon& lexicon, const TrainConfig& config) {
  config.validate();
  if (lexicon.empty()) throw std::invalid_argument("empty lexicon");

  EmbeddingModel model;
  model.dim = config.dim;
  model.window = config.window;
  model.mode = corpus.mode;
  model.walk_length = corpus.walk_length;
  model.samples = corpus.samples;
  model.tree = build_huffman(lexicon);

  const std::size_t d = config.dim;
  model.node_vectors = Matrix(corpus.num_nodes, d);
  model.token_vectors = Matrix(lexicon.size(), d);
  model.inner_weights = Matrix(model.tree.num_internal(), 2 * d);
  model.inner_bias.assign(model.tree.num_internal(), 0.0);

  Rng rng(derive_seed(config.seed, 0x1417));
  const double scale = 0.5 / static_cast<double>(d);
  for (auto& x : model.token_vectors.data()) x = rng.uniform(-scale, scale);
  for (NodeId v : corpus.nodes) {
    for (auto& x : model.node_vectors.row(v)) x = rng.uniform(-scale, scale);
  }
  return model;
}

std::vector<double> pooled_input(const EmbeddingModel& model, std::span<const TokenId> context,
                                 NodeId node) {
  check_ids(model, context, node);
  const std::size_t d = model.dim;
  std::vector<double> x(2 * d, 0.0);
  for (TokenId t : context) {
    auto w = model.token_vectors.row(t);
    for (std::size_t i = 0; i < d; ++i) x[i] += w[i];
  }
  auto z = model.node_vectors.row(node);
  std::copy(z.begin(), z.end(), x.begin() + static_cast<std::ptrdiff_t>(d));
  return x;
}

double score(const EmbeddingModel& model, std::span<const TokenId> context, NodeId node,
             TokenId target) {
  if (target >= model.num_tokens()) throw std::out_of_range("target token id out of range");
  const auto x = pooled_input(model, context, node);
  const auto& path = model.tree.paths[target];
  const auto& code = model.tree.codes[target];
  double y = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double s = model.inner_bias[path[k]] + dot(model.inner_weights.row(path[k]), x);
    y += code[k] ? -s : s;
  }
  return y;
}

double token_log_prob(const EmbeddingModel& model, std::span<const TokenId> context, NodeId node,
                      TokenId target) {
  if (target >= model.num_tokens()) throw std::out_of_range("target token id out of range");
  const auto x = pooled_input(model, context, node);
  const auto& path = model.tree.paths[target];
  const auto& code = model.tree.codes[target];
  double lp = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double s = model.inner_bias[path[k]] + dot(model.inner_weights.row(path[k]), x);
    lp += log_sigmoid(code[k] ? -s : s);
  }
  return lp;
}

std::vector<TokenId> window_context(const Corpus& corpus, std::size_t row, std::uint32_t t,
                                    std::uint32_t window) {
  if (t < window || static_cast<std::uint64_t>(t) + window >= corpus.samples) {
    throw std::invalid_argument("position " + std::to_string(t) +
                                " is outside the window-valid range [" + std::to_string(window) +
                                ", T - window - 1]");
  }
  auto ctx = corpus.context(row);
  std::vector<TokenId> out;
  out.reserve(2 * window);
  for (std::uint32_t j = t - window; j <= t + window; ++j) {
    if (j != t) out.push_back(ctx[j]);
  }
  return out;
}

double window_log_prob(const EmbeddingModel& model, const Corpus& corpus, NodeId node,
                       std::uint32_t t) {
  const std::size_t row = checked_row(corpus, node);
  const auto ctx = window_context(corpus, row, t, model.window);
  return token_log_prob(model, ctx, node, corpus.context(row)[t]);
}

namespace {

template <class Fn>
void for_each_window(const Corpus& corpus, std::uint32_t window, Fn&& fn) {
  if (corpus.samples <= 2 * window) return;
  for (std::size_t row = 0; row < corpus.num_contexts(); ++row) {
    for (std::uint32_t t = window; t + window < corpus.samples; ++t) fn(row, t);
  }
}

}  // namespace

double objective(const EmbeddingModel& model, const Corpus& corpus) {
  double sum = 0.0;
  for_each_window(corpus, model.window, [&](std::size_t row, std::uint32_t t) {
    sum += window_log_prob(model, corpus, corpus.nodes[row], t);
  });
  return sum / (static_cast<double>(corpus.num_contexts()) * corpus.samples);
}

double mean_log_likelihood(const EmbeddingModel& model, const Corpus& corpus) {
  double sum = 0.0;
  std::size_t count = 0;
  for_each_window(corpus, model.window, [&](std::size_t row, std::uint32_t t) {
    sum += window_log_prob(model, corpus, corpus.nodes[row], t);
    ++count;
  });
  return count ? sum / static_cast<double>(count) : 0.0;
}

ModelGradient::ModelGradient(const EmbeddingModel& model)
    : node_vectors(model.node_vectors.rows(), model.node_vectors.cols()),
      token_vectors(model.token_vectors.rows(), model.token_vectors.cols()),
      inner_weights(model.inner_weights.rows(), model.inner_weights.cols()),
      inner_bias(model.inner_bias.size(), 0.0) {}

void ModelGradient::clear() {
  std::fill(node_vectors.data().begin(), node_vectors.data().end(), 0.0);
  std::fill(token_vectors.data().begin(), token_vectors.data().end(), 0.0);
  std::fill(inner_weights.data().begin(), inner_weights.data().end(), 0.0);
  std::fill(inner_bias.begin(), inner_bias.end(), 0.0);
}

void accumulate_gradient(const EmbeddingModel& model, std::span<const TokenId> context,
                         NodeId node, TokenId target, double scale, ModelGradient& grad) {
  if (target >= model.num_tokens()) throw std::out_of_range("target token id out of range");
  const std::size_t d = model.dim;
  const auto x = pooled_input(model, context, node);
  std::vector<double> e(2 * d, 0.0);

  const auto& path = model.tree.paths[target];
  const auto& code = model.tree.codes[target];
  for (std::size_t k = 0; k < path.size(); ++k) {
    const auto u = model.inner_weights.row(path[k]);
    const double s = model.inner_bias[path[k]] + dot(u, x);
    const double g = (1.0 - code[k]) - sigmoid(s);  // d/ds log sigma(+-s)
    auto gu = grad.inner_weights.row(path[k]);
    for (std::size_t i = 0; i < 2 * d; ++i) {
      gu[i] += scale * g * x[i];
      e[i] += g * u[i];
    }
    grad.inner_bias[path[k]] += scale * g;
  }

  auto gz = grad.node_vectors.row(node);
  for (std::size_t i = 0; i < d; ++i) gz[i] += scale * e[d + i];
  for (TokenId t : context) {
    auto gw = grad.token_vectors.row(t);
    for (std::size_t i = 0; i < d; ++i) gw[i] += scale * e[i];
  }
}

GradCheckResult grad_check(const EmbeddingModel& model, const Corpus& corpus, NodeId node,
                           std::uint32_t t, double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    throw std::invalid_argument("epsilon must lie in [1e-7, 1e-3]");
  }
  const std::size_t row = checked_row(corpus, node);
  const auto ctx = window_context(corpus, row, t, model.window);
  const TokenId target = corpus.context(row)[t];

  ModelGradient analytic(model);
  accumulate_gradient(model, ctx, node, target, 1.0, analytic);

  EmbeddingModel probe = model;
  GradCheckResult result;
  auto check = [&](double& param, double expected) {
    const double saved = param;
    param = saved + epsilon;
    const double up = window_log_prob(probe, corpus, node, t);
    param = saved - epsilon;
    const double down = window_log_prob(probe, corpus, node, t);
    param = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double abs_err = std::abs(expected - numeric);
    const double denom = std::max({std::abs(expected), std::abs(numeric), 1e-6});
    result.max_absolute_error = std::max(result.max_absolute_error, abs_err);
    result.max_relative_error = std::max(result.max_relative_error, abs_err / denom);
    ++result.parameters_checked;
  };

  const std::size_t d = model.dim;
  for (std::size_t i = 0; i < d; ++i) {
    check(probe.node_vectors(node, i), analytic.node_vectors(node, i));
  }
  std::vector<TokenId> distinct(ctx.begin(), ctx.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (TokenId tok : distinct) {
    for (std::size_t i = 0; i < d; ++i) {
      check(probe.token_vectors(tok, i), analytic.token_vectors(tok, i));
    }
  }
  for (std::uint32_t inner : model.tree.paths[target]) {
    for (std::size_t i = 0; i < 2 * d; ++i) {
      check(probe.inner_weights(inner, i), analytic.inner_weights(inner, i));
    }
    check(probe.inner_bias[inner], analytic.inner_bias[inner]);
  }
  return result;
}

}  // namespace hawe

#include <doctest.h>

#include <cmath>
#include <fstream>

#include "hawe/error.hpp"
#include "hawe/pvdm.hpp"
#include "test_support.hpp"

using namespace hawe;
using hawe::testing::random_corpus;
using hawe::testing::randomize;
using hawe::testing::TempDir;

namespace {

TrainConfig small_config(std::uint32_t dim, std::uint32_t window, std::uint64_t seed = 1) {
  TrainConfig cfg;
  cfg.dim = dim;
  cfg.window = window;
  cfg.epochs = 1;
  cfg.seed = seed;
  return cfg;
}

EmbeddingModel zero_model(const Corpus& c, const Lexicon& lex, std::uint32_t dim, std::uint32_t window) {
  EmbeddingModel m = init_model(c, lex, small_config(dim, window));
  for (auto* v : {&m.node_vectors.data(), &m.token_vectors.data()}) std::fill(v->begin(), v->end(), 0.0);
  return m;
}

}  // namespace

TEST_CASE("config validation") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.window = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.epochs = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.lr_end = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.lr_start = 0.00001;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("initialization ranges and shapes") {
  Rng rng(1);
  auto [c, lex] = random_corpus(rng, 5, 20, 7);
  const auto m = init_model(c, lex, small_config(8, 2));
  CHECK(m.node_vectors.rows() == 5);
  CHECK(m.token_vectors.rows() == 7);
  CHECK(m.inner_weights.rows() == 6);
  CHECK(m.inner_weights.cols() == 16);
  for (double x : m.node_vectors.data()) CHECK(std::abs(x) <= 0.5 / 8);
  for (double x : m.token_vectors.data()) CHECK(std::abs(x) <= 0.5 / 8);
  for (double x : m.inner_weights.data()) CHECK(x == 0.0);
  for (double x : m.inner_bias) CHECK(x == 0.0);
  CHECK(m.all_finite());
}

TEST_CASE("score: zero parameters, permutation symmetry, linearity") {
  Rng rng(2);
  auto [c, lex] = random_corpus(rng, 3, 20, 7);
  auto m = zero_model(c, lex, 4, 2);
  const std::vector<TokenId> ctx{0, 3, 3, 6};
  for (TokenId t = 0; t < 7; ++t) CHECK(score(m, ctx, 1, t) == 0.0);

  randomize(m, rng, 1.0);
  std::vector<TokenId> shuffled{6, 3, 0, 3};
  for (TokenId t = 0; t < 7; ++t) {
    CHECK(score(m, ctx, 1, t) == doctest::Approx(score(m, shuffled, 1, t)).epsilon(1e-13));
  }

  const auto x = pooled_input(m, ctx, 1);
  auto doubled = m;
  for (auto& v : doubled.token_vectors.row(0)) v *= 2.0;
  const auto x2 = pooled_input(doubled, ctx, 1);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(x2[i] - x[i] == doctest::Approx(m.token_vectors(0, i)).epsilon(1e-12));
    CHECK(x2[4 + i] == x[4 + i]);
    CHECK(x[4 + i] == m.node_vectors(1, i));
  }

  CHECK_THROWS_AS(score(m, ctx, 1, 7), std::out_of_range);
  CHECK_THROWS_AS(score(m, std::vector<TokenId>{9}, 1, 0), std::out_of_range);
  CHECK_THROWS_AS(score(m, ctx, 5, 0), std::out_of_range);
}

TEST_CASE("tiny lexicons") {
  Rng rng(3);
  auto [c1, lex1] = random_corpus(rng, 1, 8, 1);
  auto m1 = init_model(c1, lex1, small_config(4, 1));
  randomize(m1, rng, 1.0);
  for (std::uint32_t t = 1; t < 7; ++t) CHECK(window_log_prob(m1, c1, 0, t) == 0.0);

  auto [c2, lex2] = random_corpus(rng, 2, 8, 2);
  auto m2 = init_model(c2, lex2, small_config(4, 1));
  for (std::uint32_t t = 1; t < 7; ++t) {
    CHECK(window_log_prob(m2, c2, 0, t) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  }
}

TEST_CASE("window range is enforced") {
  Rng rng(4);
  auto [c, lex] = random_corpus(rng, 2, 10, 3);
  const auto m = init_model(c, lex, small_config(4, 2));
  CHECK_NOTHROW(window_log_prob(m, c, 0, 2));
  CHECK_NOTHROW(window_log_prob(m, c, 0, 7));
  CHECK_THROWS_AS(window_log_prob(m, c, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(window_log_prob(m, c, 0, 8), std::invalid_argument);
  CHECK(window_context(c, 0, 3, 2).size() == 4);
}

TEST_CASE("leaf probabilities sum to one on a 7-token lexicon") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto [c, lex] = random_corpus(rng, 3, 12, 7);
    auto m = init_model(c, lex, small_config(3, 2));
    randomize(m, rng, trial < 25 ? 1.0 : 4.0);
    for (int k = 0; k < 5; ++k) {
      std::vector<TokenId> ctx(1 + rng.below(6));
      for (auto& t : ctx) t = static_cast<TokenId>(rng.below(7));
      const auto node = static_cast<NodeId>(rng.below(3));
      double sum = 0.0;
      for (TokenId t = 0; t < 7; ++t) sum += std::exp(token_log_prob(m, ctx, node, t));
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("gradient check on random small models") {
  Rng rng(6);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng local(seed);
    auto [c, lex] = random_corpus(local, 3, 12, 7);
    auto m = init_model(c, lex, small_config(4, 2, seed));
    randomize(m, local, 0.5);
    const auto node = static_cast<NodeId>(local.below(3));
    const auto t = 2 + static_cast<std::uint32_t>(local.below(8));
    const auto r = grad_check(m, c, node, t, 1e-5);
    CHECK(r.max_relative_error < 1e-4);
    CHECK(r.parameters_checked > 4);
  }
}

TEST_CASE("gradient check on the zero model") {
  Rng rng(7);
  auto [c, lex] = random_corpus(rng, 2, 10, 5);
  const auto m = zero_model(c, lex, 3, 2);
  const auto r = grad_check(m, c, 1, 4, 1e-4);
  // With zero weights the only non-zero gradients are on linear directions
  // (biases, classifier weights times zero inputs), so both sides agree exactly
  // up to rounding.
  CHECK(r.max_absolute_error < 1e-10);
}

TEST_CASE("finite-difference error shrinks with epsilon") {
  Rng rng(8);
  auto [c, lex] = random_corpus(rng, 3, 12, 7);
  auto m = init_model(c, lex, small_config(4, 2));
  randomize(m, rng, 1.5);
  const double e3 = grad_check(m, c, 0, 5, 1e-3).max_absolute_error;
  const double e4 = grad_check(m, c, 0, 5, 1e-4).max_absolute_error;
  const double e5 = grad_check(m, c, 0, 5, 1e-5).max_absolute_error;
  CHECK(e4 < e3);
  CHECK(e5 < e4);
  CHECK_THROWS_AS(grad_check(m, c, 0, 5, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(grad_check(m, c, 0, 5, 1e-8), std::invalid_argument);
}

TEST_CASE("embedding export and import") {
  TempDir dir;
  const auto g = gen_pinwheel(8, 2, true);
  auto [c, lex] = build_corpus(g, {64, 4, WalkMode::HAW, 1, 1});
  TrainConfig cfg = small_config(2, 3);
  cfg.epochs = 2;
  const auto m = train(c, lex, cfg);
  export_embeddings(m, c, g.raw_ids(), dir / "e.tsv");

  std::ifstream in(dir / "e.tsv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "# dim=2 mode=haw walk_length=4 samples=64 window=3");

  const auto table = load_embeddings(dir / "e.tsv");
  CHECK(table.dim == 2);
  CHECK(table.mode == "haw");
  CHECK(table.walk_length == 4);
  CHECK(table.samples == 64);
  CHECK(table.window == 3);
  REQUIRE(table.ids.size() == g.num_nodes());
  CHECK(table.values.cols() == 2);
  for (std::size_t r = 0; r < table.ids.size(); ++r) {
    CHECK(table.ids[r] == g.raw_id(c.nodes[r]));
    for (std::size_t i = 0; i < 2; ++i) {
      const double want = m.node_vectors(c.nodes[r], i);
      CHECK(std::abs(table.values(r, i) - want) <= 1e-8 * std::max(1.0, std::abs(want)));
    }
  }

  std::ofstream(dir / "bad.tsv") << "# dim=2 mode=haw walk_length=4 samples=64 window=3\nx\t1.0\n";
  CHECK_THROWS_AS(load_embeddings(dir / "bad.tsv"), InputError);
  std::ofstream(dir / "bad2.tsv") << "# dim=2 mode=haw walk_length=4 samples=64 window=3\nx\t1.0\tzz\n";
  CHECK_THROWS_AS(load_embeddings(dir / "bad2.tsv"), InputError);
}

TEST_CASE("binary model round-trip") {
  TempDir dir;
  Rng rng(9);
  auto [c, lex] = random_corpus(rng, 4, 16, 9);
  auto m = init_model(c, lex, small_config(5, 2));
  randomize(m, rng, 1.0);
  save_model(m, dir / "m.bin");
  CHECK(load_model(dir / "m.bin") == m);

  std::ifstream in(dir / "m.bin", std::ios::binary);
  std::string bytes(std::istreambuf_iterator<char>(in), {});
  bytes[1] = '?';
  std::ofstream(dir / "bad.bin", std::ios::binary) << bytes;
  CHECK_THROWS_AS(load_model(dir / "bad.bin"), InputError);
  std::ofstream(dir / "short.bin", std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  CHECK_THROWS_AS(load_model(dir / "short.bin"), InputError);
}

#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "hawe/evalharness.hpp"
#include "test_support.hpp"

using namespace hawe;

namespace {

std::vector<std::int32_t> role_labels(const HeteroGraph& g) {
  const auto roles = wl_roles(g);
  return {roles.roles.begin(), roles.roles.end()};
}

PipelineConfig pinwheel_config(std::uint32_t dim, std::uint32_t epochs) {
  PipelineConfig cfg;
  cfg.corpus = {1024, 6, WalkMode::HAW, 1, 1};
  cfg.train.dim = dim;
  cfg.train.window = 5;
  cfg.train.epochs = epochs;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("parse helpers") {
  CHECK(parse_sweep_param("L") == SweepParam::WalkLength);
  CHECK(parse_sweep_param("T") == SweepParam::Samples);
  CHECK(parse_sweep_param("d") == SweepParam::Dim);
  CHECK(parse_sweep_param("window") == SweepParam::Window);
  CHECK(parse_sweep_param("Delta") == SweepParam::Window);
  CHECK_THROWS_AS(parse_sweep_param("x"), std::invalid_argument);
  for (auto p : {SweepParam::WalkLength, SweepParam::Samples, SweepParam::Dim, SweepParam::Window}) {
    CHECK(parse_sweep_param(to_string(p)) == p);
  }
  CHECK(parse_graph_family("ER") == GraphFamily::ER);
  CHECK(parse_graph_family("ba") == GraphFamily::BA);
  CHECK(to_string(GraphFamily::BA) == "ba");
  CHECK_THROWS_AS(parse_graph_family("ws"), std::invalid_argument);
}

TEST_CASE("log-log slope") {
  const std::vector<double> x{1e3, 1e4, 1e5};
  CHECK(loglog_slope(x, std::vector<double>{2e-3, 2e-2, 2e-1}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(loglog_slope(x, std::vector<double>{1.0, 100.0, 1e4}) == doctest::Approx(2.0).epsilon(1e-12));
  // Least squares on (0,0), (1,1), (2,3) in log10 space: slope 1.5.
  CHECK(loglog_slope(std::vector<double>{1, 10, 100}, std::vector<double>{1, 10, 1000}) ==
        doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS_AS(loglog_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(loglog_slope(x, std::vector<double>{1.0, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(loglog_slope(std::vector<double>{2, 2}, std::vector<double>{1, 3}), std::invalid_argument);
}

TEST_CASE("pipeline rows follow the corpus and labels must cover the graph") {
  const auto g = gen_pinwheel(4, 2, true);
  const auto labels = role_labels(g);
  PipelineConfig cfg = pinwheel_config(4, 2);
  cfg.corpus.samples = 32;
  cfg.eval.repeats = 3;
  const auto r = run_pipeline(g, labels, cfg);
  REQUIRE(r.embeddings.rows() == r.corpus.num_contexts());
  for (std::size_t i = 0; i < r.corpus.num_contexts(); ++i) {
    CHECK(r.labels[i] == labels[r.corpus.nodes[i]]);
    for (std::size_t j = 0; j < 4; ++j) CHECK(r.embeddings(i, j) == r.model.node_vectors(r.corpus.nodes[i], j));
  }
  CHECK(r.report.accuracies.size() == 3);

  const auto unlabeled = run_pipeline(g, {}, cfg);
  CHECK(unlabeled.report.accuracies.empty());
  CHECK(unlabeled.model == r.model);

  CHECK_THROWS_AS(run_pipeline(g, std::vector<std::int32_t>{0, 1}, cfg), std::invalid_argument);
}

TEST_CASE("single-value sweep reproduces the base run") {
  const auto g = gen_pinwheel(6, 2, true);
  const auto labels = role_labels(g);
  PipelineConfig cfg = pinwheel_config(4, 5);
  cfg.corpus.samples = 128;
  cfg.eval.repeats = 10;
  const auto base = run_pipeline(g, labels, cfg);
  for (auto p : {SweepParam::WalkLength, SweepParam::Samples, SweepParam::Dim, SweepParam::Window}) {
    std::uint32_t v = 0;
    switch (p) {
      case SweepParam::WalkLength: v = cfg.corpus.walk_length; break;
      case SweepParam::Samples: v = cfg.corpus.samples; break;
      case SweepParam::Dim: v = cfg.train.dim; break;
      case SweepParam::Window: v = cfg.train.window; break;
    }
    const std::vector<std::uint32_t> values{v};
    const auto rows = sweep(p, values, cfg, g, labels);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].value == v);
    CHECK(rows[0].mean_accuracy == base.report.mean_accuracy);
    CHECK(rows[0].lexicon_size == base.lexicon.size());
  }
  CHECK_THROWS_AS(sweep(SweepParam::Dim, std::vector<std::uint32_t>{}, cfg, g, labels), std::invalid_argument);
  CHECK_THROWS_AS(sweep(SweepParam::Dim, std::vector<std::uint32_t>{2}, cfg, g, {}), std::invalid_argument);

  hawe::testing::TempDir dir;
  const std::vector<SweepRow> rows{{2, 0.5, 10}, {4, 1.0, 12}};
  write_sweep(SweepParam::Dim, rows, dir / "s.tsv");
  CHECK(slurp(dir / "s.tsv") == "d\tmean_accuracy\tlexicon_size\n2\t0.5\t10\n4\t1\t12\n");
}

TEST_CASE("heterogeneous pinwheel roles are recovered at d=128") {
  const auto g = gen_pinwheel(8, 2, true);
  const auto labels = role_labels(g);
  const auto r = run_pipeline(g, labels, pinwheel_config(128, 100));
  CHECK(r.report.mean_accuracy >= 0.95);
}

TEST_CASE("pinwheel nearest neighbours share the WL role") {
  const auto g = gen_pinwheel(8, 2, true);
  const auto labels = role_labels(g);
  const auto r = run_pipeline(g, {}, pinwheel_config(2, 100));
  std::vector<std::string> ids;
  for (NodeId v : r.corpus.nodes) ids.push_back(g.raw_id(v));
  std::size_t agree = 0, total = 0;
  for (std::size_t row = 0; row < ids.size(); ++row) {
    const auto list = topk_search(r.embeddings, ids, row, 3);
    for (const auto& nb : list.neighbors) {
      ++total;
      if (labels[r.corpus.nodes[nb.row]] == labels[r.corpus.nodes[row]]) ++agree;
    }
  }
  CHECK(agree == total);
}

TEST_CASE("bench rows and output") {
  BenchConfig cfg;
  cfg.corpus = {8, 4, WalkMode::HAW, 1, 1};
  cfg.train.dim = 4;
  cfg.train.window = 2;
  cfg.train.epochs = 1;
  cfg.runs = 2;
  const std::vector<std::uint32_t> sizes{50, 100};
  const auto rows = bench_runtime(sizes, GraphFamily::ER, cfg);
  REQUIRE(rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(rows[i].nodes == sizes[i]);
    CHECK(rows[i].seconds == doctest::Approx(rows[i].corpus_seconds + rows[i].train_seconds));
    CHECK(rows[i].lexicon_size > 0);
  }
  const auto ba = bench_runtime(sizes, GraphFamily::BA, cfg);
  CHECK(ba[1].edges == 99);

  CHECK_THROWS_AS(bench_runtime(std::vector<std::uint32_t>{100, 50}, GraphFamily::ER, cfg), std::invalid_argument);
  cfg.runs = 0;
  CHECK_THROWS_AS(bench_runtime(sizes, GraphFamily::ER, cfg), std::invalid_argument);

  hawe::testing::TempDir dir;
  const std::vector<BenchRow> out{{10, 20, 3, 0.25, 0.5, 0.75}};
  write_bench(out, dir / "b.tsv");
  CHECK(slurp(dir / "b.tsv") ==
        "n\tedges\tseconds\tcorpus_seconds\ttrain_seconds\tlexicon_size\n"
        "10\t20\t0.750000\t0.250000\t0.500000\t3\n");
}

TEST_CASE("doubling epochs roughly doubles training time") {
  const auto g = gen_er(2000, 0.005, 2, 3);
  auto [c, lex] = build_corpus(g, {32, 6, WalkMode::HAW, 1, 1});
  auto best_time = [&](std::uint32_t epochs) {
    TrainConfig cfg;
    cfg.dim = 16;
    cfg.epochs = epochs;
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto m = train(c, lex, cfg);
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      CHECK(m.all_finite());
    }
    return best;
  };
  const double one = best_time(2);
  const double two = best_time(4);
  const double ratio = two / one;
  INFO("ratio " << ratio);
  CHECK(ratio >= 1.4);
  CHECK(ratio <= 2.6);
}

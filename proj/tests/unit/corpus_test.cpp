#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <numeric>

#include "hawe/corpus.hpp"
#include "hawe/error.hpp"
#include "test_support.hpp"

using namespace hawe;
using hawe::testing::make_graph;
using hawe::testing::TempDir;

namespace {

CorpusConfig config(std::uint32_t samples, std::uint32_t length, WalkMode mode, std::uint64_t seed,
                    unsigned threads = 1) {
  return {samples, length, mode, seed, threads};
}

}  // namespace

TEST_CASE("lexicon interning") {
  Lexicon lex;
  CHECK(lex.add("0-1-0") == 0);
  CHECK(lex.add("0-1-2", 3) == 1);
  CHECK(lex.add("0-1-0") == 0);
  CHECK(lex.size() == 2);
  CHECK(lex.frequency(0) == 2);
  CHECK(lex.frequency(1) == 3);
  CHECK(lex.total() == 5);
  CHECK(*lex.find("0-1-2") == 1);
  CHECK_FALSE(lex.find("nope").has_value());
}

TEST_CASE("forced walks on a single edge") {
  const auto g = make_graph({0, 0}, {{0, 1}});
  auto [c, lex] = build_corpus(g, config(4, 2, WalkMode::AW, 1));
  CHECK(lex.size() == 1);
  CHECK(lex.token(0) == "0-1-0");
  CHECK(lex.frequency(0) == 8);
  CHECK(c.num_contexts() == 2);
  for (std::size_t r = 0; r < 2; ++r) {
    for (TokenId t : c.context(r)) CHECK(t == 0);
  }
}

TEST_CASE("isolated nodes are listed apart") {
  const auto g = make_graph({0, 0, 0, 0}, {{0, 2}});
  auto [c, lex] = build_corpus(g, config(8, 3, WalkMode::HAW, 1));
  CHECK(c.nodes == std::vector<NodeId>{0, 2});
  CHECK(c.isolated == std::vector<NodeId>{1, 3});
  CHECK(c.row_of(2) == std::optional<std::size_t>{1});
  CHECK_FALSE(c.row_of(1).has_value());
  CHECK(c.tokens.size() == 16);

  const auto empty = make_graph({0, 0}, {});
  CHECK_THROWS_AS(build_corpus(empty, config(8, 3, WalkMode::AW, 1)), GraphError);
  CHECK_THROWS_AS(build_corpus(g, config(0, 3, WalkMode::AW, 1)), std::invalid_argument);
  CHECK_THROWS_AS(build_corpus(g, config(8, 0, WalkMode::AW, 1)), std::invalid_argument);
}

TEST_CASE("corpus invariants on random graphs") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = hawe::testing::random_connected_graph(rng, 5 + static_cast<std::uint32_t>(rng.below(40)),
                                                         0.1, 3);
    for (WalkMode mode : {WalkMode::AW, WalkMode::HAW, WalkMode::CHAW}) {
      auto [c, lex] = build_corpus(g, config(64, 5, mode, trial));
      CHECK(c.tokens.size() == c.num_contexts() * 64);
      std::vector<std::uint64_t> counted(lex.size(), 0);
      TokenId last_new = 0;
      for (TokenId t : c.tokens) {
        REQUIRE(t < lex.size());
        // Ids are assigned in first-occurrence order.
        CHECK(t <= last_new);
        if (t == last_new) ++last_new;
        ++counted[t];
      }
      CHECK(std::equal(counted.begin(), counted.end(), lex.frequencies().begin()));
      CHECK(lex.total() == c.tokens.size());
      for (auto f : lex.frequencies()) CHECK(f > 0);
    }
  }
}

TEST_CASE("corpus is identical for any thread count") {
  const auto g = gen_er(400, 0.02, 3, 4);
  const auto base = build_corpus(g, config(128, 6, WalkMode::HAW, 77, 1));
  for (unsigned threads : {2u, 3u, 8u}) {
    const auto other = build_corpus(g, config(128, 6, WalkMode::HAW, 77, threads));
    CHECK(other.first == base.first);
    CHECK(other.second == base.second);
  }
  const auto reseeded = build_corpus(g, config(128, 6, WalkMode::HAW, 78, 1));
  CHECK_FALSE(reseeded.first == base.first);
}

TEST_CASE("one type: HAW and AW corpora are in bijection") {
  const auto g = gen_ba(300, 2, 1, 3);
  auto [caw, law] = build_corpus(g, config(64, 5, WalkMode::AW, 9));
  auto [chaw, lhaw] = build_corpus(g, config(64, 5, WalkMode::HAW, 9));
  CHECK(law.size() == lhaw.size());
  CHECK(std::equal(law.frequencies().begin(), law.frequencies().end(), lhaw.frequencies().begin()));
  // Same walks, same first-occurrence order, so the id streams coincide.
  CHECK(caw.tokens == chaw.tokens);
}

TEST_CASE("CHAW lexicon never exceeds HAW lexicon") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = gen_er(200, 0.05, 3, seed);
    const auto haw = build_corpus(g, config(256, 6, WalkMode::HAW, seed)).second.size();
    const auto chaw = build_corpus(g, config(256, 6, WalkMode::CHAW, seed)).second.size();
    const auto aw = build_corpus(g, config(256, 6, WalkMode::AW, seed)).second.size();
    CHECK(chaw <= haw);
    CHECK(aw <= chaw);
  }
}

TEST_CASE("lexicon is far smaller than the token count") {
  const auto g = gen_er(1000, 10.0 / 1000.0, 2, 1);
  auto [c, lex] = build_corpus(g, config(1024, 6, WalkMode::HAW, 1));
  CHECK(lex.size() < c.tokens.size());
  CHECK(lex.size() * 100 < c.tokens.size());
}

TEST_CASE("binary round-trip") {
  TempDir dir;
  const auto g = gen_pinwheel(8, 2, true);
  auto [c, lex] = build_corpus(g, config(256, 6, WalkMode::CHAW, 3));
  save_corpus(c, lex, dir / "c.bin");
  auto [c2, lex2] = load_corpus(dir / "c.bin");
  CHECK(c2 == c);
  CHECK(lex2 == lex);
  for (TokenId t = 0; t < lex.size(); ++t) CHECK(lex2.token(t) == lex.token(t));

  // Saving again gives the same bytes.
  save_corpus(c2, lex2, dir / "c2.bin");
  std::ifstream a(dir / "c.bin", std::ios::binary), b(dir / "c2.bin", std::ios::binary);
  CHECK(std::string(std::istreambuf_iterator<char>(a), {}) ==
        std::string(std::istreambuf_iterator<char>(b), {}));
}

TEST_CASE("corrupt corpus files are rejected") {
  TempDir dir;
  const auto g = gen_pinwheel(4, 1, false);
  auto [c, lex] = build_corpus(g, config(16, 3, WalkMode::AW, 3));
  save_corpus(c, lex, dir / "c.bin");
  std::ifstream in(dir / "c.bin", std::ios::binary);
  std::string bytes(std::istreambuf_iterator<char>(in), {});

  std::string bad = bytes;
  bad[0] = 'X';
  std::ofstream(dir / "magic.bin", std::ios::binary) << bad;
  CHECK_THROWS_AS(load_corpus(dir / "magic.bin"), InputError);

  bad = bytes;
  bad[8] = static_cast<char>(99);  // version field follows the 8-byte magic
  std::ofstream(dir / "version.bin", std::ios::binary) << bad;
  CHECK_THROWS_AS(load_corpus(dir / "version.bin"), InputError);

  for (std::size_t cut : {bytes.size() / 2, bytes.size() - 1, std::size_t{3}}) {
    std::ofstream(dir / "cut.bin", std::ios::binary) << bytes.substr(0, cut);
    CHECK_THROWS_AS(load_corpus(dir / "cut.bin"), InputError);
  }
  CHECK_THROWS_AS(load_corpus(dir / "missing.bin"), InputError);
}

TEST_CASE("TSV export") {
  TempDir dir;
  const auto g = make_graph({0, 0}, {{0, 1}});
  auto [c, lex] = build_corpus(g, config(3, 2, WalkMode::AW, 1));
  export_corpus_tsv(c, lex, g.raw_ids(), dir / "c.tsv");
  std::ifstream in(dir / "c.tsv");
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  }
  CHECK(rows == std::vector<std::string>{"0\t0-1-0 0-1-0 0-1-0", "1\t0-1-0 0-1-0 0-1-0"});
}

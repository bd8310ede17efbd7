#pragma once

// Small hand-rolled generators shared by the unit and acceptance tests.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include "hawe/corpus.hpp"
#include "hawe/hetgraph.hpp"
#include "hawe/pvdm.hpp"
#include "hawe/random.hpp"

namespace hawe::testing {

inline std::vector<std::string> letters(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(type_code(static_cast<TypeId>(i)));
  return out;
}

inline HeteroGraph make_graph(std::vector<TypeId> types, const std::vector<Edge>& edges) {
  std::size_t num_types = 0;
  for (TypeId t : types) num_types = std::max<std::size_t>(num_types, t + 1);
  return HeteroGraph(std::move(types), letters(num_types), edges);
}

/// Connected random graph: a random spanning tree plus each remaining pair
/// with probability `extra`. Types uniform over `num_types`.
inline HeteroGraph random_connected_graph(Rng& rng, std::uint32_t n, double extra,
                                          std::uint32_t num_types) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) {
    edges.emplace_back(static_cast<NodeId>(rng.below(v)), v);
  }
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.uniform() < extra) edges.emplace_back(u, v);
    }
  }
  std::vector<TypeId> types(n);
  for (auto& t : types) t = static_cast<TypeId>(rng.below(num_types));
  return HeteroGraph(std::move(types), letters(num_types), edges);
}

/// Relabels node v as perm[v], keeping types attached to their nodes.
inline HeteroGraph permute_graph(const HeteroGraph& g, const std::vector<NodeId>& perm) {
  std::vector<TypeId> types(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) types[perm[v]] = g.type(v);
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  return HeteroGraph(std::move(types), g.type_names(), edges);
}

inline std::vector<NodeId> random_permutation(Rng& rng, std::size_t n) {
  std::vector<NodeId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<NodeId>(i);
  rng.shuffle(perm.begin(), perm.end());
  return perm;
}

/// Corpus over `nodes` graph nodes whose contexts are drawn uniformly from a
/// lexicon of `num_tokens` dummy tokens (each used at least once).
inline std::pair<Corpus, Lexicon> random_corpus(Rng& rng, std::uint32_t num_nodes,
                                                std::uint32_t samples, std::uint32_t num_tokens) {
  Corpus c;
  c.samples = samples;
  c.walk_length = 2;
  c.mode = WalkMode::AW;
  c.num_nodes = num_nodes;
  for (NodeId v = 0; v < num_nodes; ++v) c.nodes.push_back(v);
  c.tokens.resize(static_cast<std::size_t>(num_nodes) * samples);
  for (std::size_t i = 0; i < c.tokens.size(); ++i) {
    c.tokens[i] = i < num_tokens ? static_cast<TokenId>(i)
                                 : static_cast<TokenId>(rng.below(num_tokens));
  }
  std::vector<std::uint64_t> counts(num_tokens, 0);
  for (TokenId t : c.tokens) ++counts[t];
  Lexicon counted;
  for (TokenId t = 0; t < num_tokens; ++t) counted.add("tok" + std::to_string(t), counts[t]);
  return {std::move(c), std::move(counted)};
}

/// Overwrites every parameter with uniform noise in [-scale, scale].
inline void randomize(EmbeddingModel& m, Rng& rng, double scale) {
  for (auto* v : {&m.node_vectors.data(), &m.token_vectors.data(), &m.inner_weights.data(),
                  &m.inner_bias}) {
    for (double& x : *v) x = rng.uniform(-scale, scale);
  }
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("hawe_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace hawe::testing

#include "hawe/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "hawe/error.hpp"
#include "hawe/random.hpp"

namespace hawe {

TokenId Lexicon::add(std::string_view token, std::uint64_t count) {
  auto [it, inserted] =
      index_.try_emplace(std::string(token), static_cast<TokenId>(tokens_.size()));
  if (inserted) {
    tokens_.emplace_back(token);
    frequencies_.push_back(0);
  }
  frequencies_[it->second] += count;
  return it->second;
}

std::optional<TokenId> Lexicon::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Lexicon::total() const {
  std::uint64_t sum = 0;
  for (auto f : frequencies_) sum += f;
  return sum;
}

std::optional<std::size_t> Corpus::row_of(NodeId v) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
  if (it == nodes.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

namespace {

/// Worker-local interning table; ids are only meaningful within one worker.
struct LocalLexicon {
  std::unordered_map<std::string, TokenId> index;
  std::vector<const std::string*> strings;

  TokenId intern(const std::string& token) {
    auto it = index.find(token);
    if (it != index.end()) return it->second;
    auto [pos, inserted] = index.emplace(token, static_cast<TokenId>(strings.size()));
    strings.push_back(&pos->first);
    return pos->second;
  }
};

}  // namespace

std::pair<Corpus, Lexicon> build_corpus(const HeteroGraph& graph, const CorpusConfig& config) {
  if (config.samples < 1) throw std::invalid_argument("samples per node (T) must be >= 1");
  if (config.walk_length < 1) throw std::invalid_argument("walk length (L) must be >= 1");

  Corpus corpus;
  corpus.samples = config.samples;
  corpus.walk_length = config.walk_length;
  corpus.mode = config.mode;
  corpus.seed = config.seed;
  corpus.num_nodes = static_cast<std::uint32_t>(graph.num_nodes());
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    (graph.degree(v) > 0 ? corpus.nodes : corpus.isolated).push_back(v);
  }
  if (corpus.nodes.empty()) throw GraphError("graph has no node with a neighbour; nothing to sample");

  const std::size_t rows = corpus.nodes.size();
  const std::size_t T = config.samples;
  corpus.tokens.resize(rows * T);

  const unsigned workers =
      std::clamp<unsigned>(std::min<std::size_t>(config.threads, rows), 1u, 1024u);
  std::vector<LocalLexicon> locals(workers);
  std::vector<std::uint16_t> owner(rows);

  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> next_row{0};

  auto work = [&](unsigned w) {
    LocalLexicon& local = locals[w];
    TokenRenderer renderer(graph, config.mode);
    std::vector<NodeId> walk;
    while (true) {
      const std::size_t begin = next_row.fetch_add(kChunk);
      if (begin >= rows) break;
      const std::size_t end = std::min(rows, begin + kChunk);
      for (std::size_t row = begin; row < end; ++row) {
        const NodeId v = corpus.nodes[row];
        Rng rng(derive_seed(config.seed, v));
        TokenId* out = corpus.tokens.data() + row * T;
        for (std::size_t s = 0; s < T; ++s) {
          sample_walk_into(graph, v, config.walk_length, rng, walk);
          out[s] = local.intern(renderer.render(walk));
        }
        owner[row] = static_cast<std::uint16_t>(w);
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  // Renumber into global ids by first occurrence in node order.
  Lexicon lexicon;
  constexpr TokenId kUnassigned = static_cast<TokenId>(-1);
  std::vector<std::vector<TokenId>> remap(workers);
  for (unsigned w = 0; w < workers; ++w) remap[w].assign(locals[w].strings.size(), kUnassigned);

  std::vector<std::uint64_t> counts;
  for (std::size_t row = 0; row < rows; ++row) {
    auto& map = remap[owner[row]];
    const auto& strings = locals[owner[row]].strings;
    TokenId* ctx = corpus.tokens.data() + row * T;
    for (std::size_t s = 0; s < T; ++s) {
      TokenId& g = map[ctx[s]];
      if (g == kUnassigned) {
        g = lexicon.add(*strings[ctx[s]], 0);
        // Another worker may already have introduced the same string.
        if (g == counts.size()) counts.push_back(0);
      }
      ctx[s] = g;
      ++counts[g];
    }
  }
  for (TokenId id = 0; id < counts.size(); ++id) lexicon.add(lexicon.token(id), counts[id]);

  return {std::move(corpus), std::move(lexicon)};
}

}  // namespace hawe

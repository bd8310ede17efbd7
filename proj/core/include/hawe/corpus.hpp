#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hawe/hetgraph.hpp"
#include "hawe/walklang.hpp"

namespace hawe {

using TokenId = std::uint32_t;

/// Interned token strings with occurrence counts. Ids are contiguous from 0
/// and follow first occurrence in node order.
class Lexicon {
 public:
  /// Adds `count` occurrences of `token`, creating it if new.
  TokenId add(std::string_view token, std::uint64_t count = 1);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& token(TokenId id) const { return tokens_[id]; }
  std::uint64_t frequency(TokenId id) const { return frequencies_[id]; }
  std::span<const std::string> tokens() const noexcept { return tokens_; }
  std::span<const std::uint64_t> frequencies() const noexcept { return frequencies_; }
  std::optional<TokenId> find(std::string_view token) const;
  std::uint64_t total() const;

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.tokens_ == b.tokens_ && a.frequencies_ == b.frequencies_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> frequencies_;
  std::unordered_map<std::string, TokenId> index_;
};

/// Per-node token sequences ("paragraphs"). Every node with at least one
/// neighbour gets exactly `samples` tokens; isolated nodes are listed apart.
struct Corpus {
  std::uint32_t samples = 0;      ///< T, walks per node
  std::uint32_t walk_length = 0;  ///< L, edges per walk
  WalkMode mode = WalkMode::HAW;
  std::uint64_t seed = 0;
  std::uint32_t num_nodes = 0;    ///< node count of the source graph
  std::vector<NodeId> nodes;      ///< nodes that own a context, ascending
  std::vector<NodeId> isolated;   ///< nodes without neighbours, ascending
  std::vector<TokenId> tokens;    ///< nodes.size() * samples, row-major

  std::size_t num_contexts() const noexcept { return nodes.size(); }
  std::span<const TokenId> context(std::size_t row) const {
    return {tokens.data() + row * samples, samples};
  }
  std::optional<std::size_t> row_of(NodeId v) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct CorpusConfig {
  std::uint32_t samples = 1024;
  std::uint32_t walk_length = 6;
  WalkMode mode = WalkMode::HAW;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Samples `samples` walks from every non-isolated node and interns their
/// tokens. Each node draws from its own generator seeded by
/// derive_seed(seed, node), and token ids are renumbered in node order after
/// sampling, so the output does not depend on the thread count.
std::pair<Corpus, Lexicon> build_corpus(const HeteroGraph& graph, const CorpusConfig& config);

inline constexpr std::uint32_t kCorpusFormatVersion = 1;

/// Versioned little-endian binary file. load_corpus throws InputError on a
/// wrong magic header, an unsupported version, or a truncated file.
void save_corpus(const Corpus& corpus, const Lexicon& lexicon, const std::filesystem::path& path);
std::pair<Corpus, Lexicon> load_corpus(const std::filesystem::path& path);

/// Debug export: raw node id, then the node's tokens separated by spaces.
void export_corpus_tsv(const Corpus& corpus, const Lexicon& lexicon,
                       std::span<const std::string> raw_ids, const std::filesystem::path& path);

}  // namespace hawe

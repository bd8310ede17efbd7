#include <fstream>

#include "binary_io.hpp"
#include "hawe/corpus.hpp"

namespace hawe {

namespace {
constexpr char kCorpusMagic[9] = "HAWECORP";
constexpr char kTrailer[9] = "CORPEND.";
}  // namespace

void save_corpus(const Corpus& corpus, const Lexicon& lexicon, const std::filesystem::path& path) {
  detail::BinaryWriter out(path);
  out.bytes(kCorpusMagic, 8);
  out.put<std::uint32_t>(kCorpusFormatVersion);
  out.put<std::uint32_t>(corpus.samples);
  out.put<std::uint32_t>(corpus.walk_length);
  out.put<std::uint8_t>(static_cast<std::uint8_t>(corpus.mode));
  out.put<std::uint64_t>(corpus.seed);
  out.put<std::uint32_t>(corpus.num_nodes);
  out.put_vector(corpus.nodes);
  out.put_vector(corpus.isolated);

  out.put<std::uint64_t>(lexicon.size());
  for (TokenId id = 0; id < lexicon.size(); ++id) {
    out.put_string(lexicon.token(id));
    out.put<std::uint64_t>(lexicon.frequency(id));
  }
  out.put_vector(corpus.tokens);
  out.bytes(kTrailer, 8);
  out.finish();
}

std::pair<Corpus, Lexicon> load_corpus(const std::filesystem::path& path) {
  detail::BinaryReader in(path);
  in.expect_header(kCorpusMagic, kCorpusFormatVersion);

  Corpus corpus;
  corpus.samples = in.get<std::uint32_t>();
  corpus.walk_length = in.get<std::uint32_t>();
  const auto mode = in.get<std::uint8_t>();
  if (mode > static_cast<std::uint8_t>(WalkMode::CHAW)) {
    throw InputError(path.string() + ": unknown walk mode tag");
  }
  corpus.mode = static_cast<WalkMode>(mode);
  corpus.seed = in.get<std::uint64_t>();
  corpus.num_nodes = in.get<std::uint32_t>();
  corpus.nodes = in.get_vector<NodeId>(corpus.num_nodes);
  corpus.isolated = in.get_vector<NodeId>(corpus.num_nodes);

  Lexicon lexicon;
  const auto lexicon_size = in.get<std::uint64_t>();
  if (lexicon_size > (1ULL << 32)) throw InputError(path.string() + ": corrupt lexicon size");
  for (std::uint64_t i = 0; i < lexicon_size; ++i) {
    std::string token = in.get_string();
    const auto freq = in.get<std::uint64_t>();
    if (lexicon.add(token, freq) != i) throw InputError(path.string() + ": duplicate lexicon token");
  }
  corpus.tokens = in.get_vector<TokenId>();

  char trailer[8];
  in.bytes(trailer, 8);
  if (std::string_view(trailer, 8) != std::string_view(kTrailer, 8)) {
    throw InputError(path.string() + ": missing trailer (truncated or corrupt file)");
  }

  if (corpus.tokens.size() != corpus.nodes.size() * static_cast<std::size_t>(corpus.samples)) {
    throw InputError(path.string() + ": token count does not match nodes x samples");
  }
  for (TokenId t : corpus.tokens) {
    if (t >= lexicon.size()) throw InputError(path.string() + ": token id out of range");
  }
  for (NodeId v : corpus.nodes) {
    if (v >= corpus.num_nodes) throw InputError(path.string() + ": node id out of range");
  }
  return {std::move(corpus), std::move(lexicon)};
}

void export_corpus_tsv(const Corpus& corpus, const Lexicon& lexicon,
                       std::span<const std::string> raw_ids, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# raw_id\ttokens (mode=" << to_string(corpus.mode) << " L=" << corpus.walk_length
      << " T=" << corpus.samples << ")\n";
  for (std::size_t row = 0; row < corpus.num_contexts(); ++row) {
    const NodeId v = corpus.nodes[row];
    out << (v < raw_ids.size() ? raw_ids[v] : std::to_string(v)) << '\t';
    bool first = true;
    for (TokenId t : corpus.context(row)) {
      if (!first) out << ' ';
      out << lexicon.token(t);
      first = false;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace hawe

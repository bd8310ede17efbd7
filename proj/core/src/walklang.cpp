#include "hawe/walklang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include "hawe/error.hpp"

namespace hawe {

std::string_view to_string(WalkMode mode) {
  switch (mode) {
    case WalkMode::AW: return "aw";
    case WalkMode::HAW: return "haw";
    case WalkMode::CHAW: return "chaw";
  }
  return "?";
}

WalkMode parse_walk_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "aw") return WalkMode::AW;
  if (lower == "haw") return WalkMode::HAW;
  if (lower == "chaw") return WalkMode::CHAW;
  throw std::invalid_argument("unknown walk mode '" + std::string(text) + "' (aw|haw|chaw)");
}

AnonWalk Haw::projection() const {
  AnonWalk aw;
  aw.positions.reserve(entries.size());
  for (const auto& e : entries) aw.positions.push_back(e.position);
  return aw;
}

bool is_valid(const AnonWalk& aw) {
  const auto& p = aw.positions;
  if (p.size() < 2 || p[0] != 0) return false;
  std::uint32_t max_seen = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > max_seen + 1 || p[i] == p[i - 1]) return false;
    max_seen = std::max(max_seen, p[i]);
  }
  return true;
}

bool is_valid(const Haw& haw) {
  if (!is_valid(haw.projection())) return false;
  std::vector<TypeId> type_of;
  for (const auto& e : haw.entries) {
    if (e.position == type_of.size()) {
      type_of.push_back(e.type);
    } else if (type_of[e.position] != e.type) {
      return false;
    }
  }
  return true;
}

bool is_valid(const Chaw& chaw) {
  if (!is_valid(chaw.aw)) return false;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < chaw.type_counts.size(); ++i) {
    if (chaw.type_counts[i].count == 0) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (chaw.type_counts[j].type == chaw.type_counts[i].type) return false;
    }
    total += chaw.type_counts[i].count;
  }
  return total == chaw.aw.positions.size();
}

void sample_walk_into(const HeteroGraph& graph, NodeId start, std::uint32_t length, Rng& rng,
                      std::vector<NodeId>& out) {
  if (length == 0) throw std::invalid_argument("walk length must be >= 1");
  if (start >= graph.num_nodes()) throw std::invalid_argument("start node out of range");
  if (graph.degree(start) == 0) {
    throw GraphError("cannot walk from isolated node " + graph.raw_id(start));
  }
  out.resize(static_cast<std::size_t>(length) + 1);
  NodeId cur = start;
  out[0] = cur;
  for (std::uint32_t i = 1; i <= length; ++i) {
    auto nb = graph.neighbors(cur);
    cur = nb[rng.below(nb.size())];
    out[i] = cur;
  }
}

Walk sample_walk(const HeteroGraph& graph, NodeId start, std::uint32_t length, Rng& rng) {
  Walk walk;
  sample_walk_into(graph, start, length, rng, walk.nodes);
  return walk;
}

namespace {

// Walks are short, so a quadratic scan for the first occurrence beats any
// hash map here.
void positions_into(std::span<const NodeId> nodes, std::vector<std::uint32_t>& out) {
  out.resize(nodes.size());
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::size_t j = 0;
    while (j < i && nodes[j] != nodes[i]) ++j;
    out[i] = (j < i) ? out[j] : next++;
  }
}

void append_uint(std::string& out, std::uint64_t value) {
  char buf[24];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, end);
}

void append_type(std::string& out, TypeId type) {
  if (type < 26) {
    out.push_back(static_cast<char>('A' + type));
    return;
  }
  char buf[8];
  int len = 0;
  std::uint64_t n = static_cast<std::uint64_t>(type) + 1;
  while (n > 0) {
    --n;
    buf[len++] = static_cast<char>('A' + n % 26);
    n /= 26;
  }
  while (len > 0) out.push_back(buf[--len]);
}

void append_positions(std::string& out, std::span<const std::uint32_t> positions) {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) out.push_back('-');
    append_uint(out, positions[i]);
  }
}

void append_counts(std::string& out, std::span<const TypeCount> counts) {
  out.push_back('|');
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) out.push_back(',');
    append_type(out, counts[i].type);
    out.push_back(':');
    append_uint(out, counts[i].count);
  }
}

void ordered_counts_into(std::span<const TypeId> types, std::vector<TypeCount>& out) {
  out.clear();
  for (TypeId t : types) {
    auto it = std::find_if(out.begin(), out.end(), [t](const TypeCount& c) { return c.type == t; });
    if (it == out.end()) {
      out.push_back({t, 1});
    } else {
      ++it->count;
    }
  }
}

}  // namespace

AnonWalk anonymize(std::span<const NodeId> nodes) {
  AnonWalk aw;
  positions_into(nodes, aw.positions);
  return aw;
}

Haw to_haw(const Walk& walk, const HeteroGraph& graph) {
  const AnonWalk aw = anonymize(walk);
  Haw haw;
  haw.entries.reserve(walk.nodes.size());
  for (std::size_t i = 0; i < walk.nodes.size(); ++i) {
    haw.entries.push_back({aw.positions[i], graph.type(walk.nodes[i])});
  }
  return haw;
}

Chaw to_chaw(const Haw& haw) {
  Chaw chaw;
  chaw.aw = haw.projection();
  std::vector<TypeId> types;
  types.reserve(haw.entries.size());
  for (const auto& e : haw.entries) types.push_back(e.type);
  ordered_counts_into(types, chaw.type_counts);
  return chaw;
}

std::string to_string(const AnonWalk& aw) {
  std::string out;
  append_positions(out, aw.positions);
  return out;
}

std::string to_string(const Haw& haw) {
  std::string out;
  for (std::size_t i = 0; i < haw.entries.size(); ++i) {
    if (i) out.push_back('-');
    append_uint(out, haw.entries[i].position);
    append_type(out, haw.entries[i].type);
  }
  return out;
}

std::string to_string(const Chaw& chaw) {
  std::string out;
  append_positions(out, chaw.aw.positions);
  append_counts(out, chaw.type_counts);
  return out;
}

const std::string& TokenRenderer::render(std::span<const NodeId> nodes) {
  positions_into(nodes, positions_);
  out_.clear();
  switch (mode_) {
    case WalkMode::AW:
      append_positions(out_, positions_);
      break;
    case WalkMode::HAW:
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out_.push_back('-');
        append_uint(out_, positions_[i]);
        append_type(out_, graph_->type(nodes[i]));
      }
      break;
    case WalkMode::CHAW: {
      append_positions(out_, positions_);
      counts_.clear();
      for (NodeId v : nodes) {
        const TypeId t = graph_->type(v);
        auto it = std::find_if(counts_.begin(), counts_.end(),
                               [t](const TypeCount& c) { return c.type == t; });
        if (it == counts_.end()) {
          counts_.push_back({t, 1});
        } else {
          ++it->count;
        }
      }
      append_counts(out_, counts_);
      break;
    }
  }
  return out_;
}

std::string token_of(const Walk& walk, const HeteroGraph& graph, WalkMode mode) {
  switch (mode) {
    case WalkMode::AW: return to_string(anonymize(walk));
    case WalkMode::HAW: return to_string(to_haw(walk, graph));
    case WalkMode::CHAW: return to_string(to_chaw(to_haw(walk, graph)));
  }
  return {};
}

}  // namespace hawe

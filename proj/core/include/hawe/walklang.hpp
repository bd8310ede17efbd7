#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hawe/hetgraph.hpp"
#include "hawe/random.hpp"

namespace hawe {

using BigInt = boost::multiprecision::cpp_int;

/// Which anonymized form a walk is reduced to before it becomes a token.
enum class WalkMode : std::uint8_t { AW = 0, HAW = 1, CHAW = 2 };

std::string_view to_string(WalkMode mode);
/// Accepts "aw", "haw", "chaw" (case-insensitive); throws std::invalid_argument.
WalkMode parse_walk_mode(std::string_view text);

/// Node sequence of a random walk. A walk of length l has l + 1 nodes.
struct Walk {
  std::vector<NodeId> nodes;
  std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  friend bool operator==(const Walk&, const Walk&) = default;
};

/// First-occurrence positions, 0-based: positions[i] is the number of distinct
/// nodes seen before the first visit of nodes[i].
struct AnonWalk {
  std::vector<std::uint32_t> positions;
  friend auto operator<=>(const AnonWalk&, const AnonWalk&) = default;
};

struct HawEntry {
  std::uint32_t position = 0;
  TypeId type = 0;
  friend auto operator<=>(const HawEntry&, const HawEntry&) = default;
};

/// Heterogeneous anonymous walk: each position paired with the node type.
struct Haw {
  std::vector<HawEntry> entries;
  AnonWalk projection() const;
  friend auto operator<=>(const Haw&, const Haw&) = default;
};

struct TypeCount {
  TypeId type = 0;
  std::uint32_t count = 0;
  friend auto operator<=>(const TypeCount&, const TypeCount&) = default;
};

/// Coarse HAW: the anonymous walk plus the ordered type count, i.e. each type
/// in order of first appearance with its number of occurrences along the walk.
struct Chaw {
  AnonWalk aw;
  std::vector<TypeCount> type_counts;
  friend auto operator<=>(const Chaw&, const Chaw&) = default;
};

/// Structural checks used by tests and by deserialization.
bool is_valid(const AnonWalk& aw);
bool is_valid(const Haw& haw);
bool is_valid(const Chaw& chaw);

// ---- Sampling and anonymization ------------------------------------------

/// Uniform random walk of `length` steps from `start`. Throws GraphError if
/// `start` is isolated and std::invalid_argument if length == 0.
Walk sample_walk(const HeteroGraph& graph, NodeId start, std::uint32_t length, Rng& rng);

/// Allocation-free variant: `out` is resized to length + 1.
void sample_walk_into(const HeteroGraph& graph, NodeId start, std::uint32_t length, Rng& rng,
                      std::vector<NodeId>& out);

AnonWalk anonymize(std::span<const NodeId> nodes);
inline AnonWalk anonymize(const Walk& walk) { return anonymize(walk.nodes); }
Haw to_haw(const Walk& walk, const HeteroGraph& graph);
Chaw to_chaw(const Haw& haw);

// ---- Canonical token strings ---------------------------------------------
//
// AW   "0-1-2-0"
// HAW  "0A-1B-2A-0A"
// CHAW "0-1-2-0|A:3,B:1"
//
// Types are written with type_code(), never with user-supplied type names,
// so the strings are unambiguous and identical across runs and platforms.

std::string to_string(const AnonWalk& aw);
std::string to_string(const Haw& haw);
std::string to_string(const Chaw& chaw);

/// Renders the canonical token for a node sequence under a mode, reusing
/// internal scratch buffers. One instance per worker thread.
class TokenRenderer {
 public:
  TokenRenderer(const HeteroGraph& graph, WalkMode mode) : graph_(&graph), mode_(mode) {}

  /// Returned reference is valid until the next call.
  const std::string& render(std::span<const NodeId> nodes);

 private:
  const HeteroGraph* graph_;
  WalkMode mode_;
  std::string out_;
  std::vector<std::uint32_t> positions_;
  std::vector<TypeCount> counts_;
};

std::string token_of(const Walk& walk, const HeteroGraph& graph, WalkMode mode);

// ---- Counting oracles ----------------------------------------------------

/// Bell number via B_l = sum_{k<l} C(l-1, k) B_k, B_0 = 1.
BigInt bell(unsigned l);

inline constexpr unsigned kMaxEnumerationLength = 10;

/// Every anonymous walk of length l (l + 1 entries), lexicographically sorted.
/// Requires 1 <= l <= 10.
std::vector<AnonWalk> enumerate_aws(unsigned l);

struct HawCount {
  BigInt exact;        ///< sum over AWs of num_types^(distinct positions)
  BigInt product_bound;  ///< num_types^l * bell(l)
};

/// Requires 1 <= l <= 10 and num_types >= 1.
HawCount count_haws(unsigned l, unsigned num_types);

// ---- Walk distributions --------------------------------------------------

/// Token -> probability. Probabilities are positive and sum to one.
struct WalkDistribution {
  std::map<std::string, double> support;

  double total() const;
  double probability(const std::string& token) const;
  /// Entries sorted by descending probability, ties by token.
  std::vector<std::pair<std::string, double>> ranked() const;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

/// Exact distribution of length-`length` tokens from `start`, by depth-first
/// enumeration of every walk (probability = product of 1/degree). Throws
/// GraphError when the walk tree exceeds `budget` expanded nodes.
WalkDistribution exact_walk_distribution(const HeteroGraph& graph, NodeId start,
                                         std::uint32_t length, WalkMode mode,
                                         std::uint64_t budget = kDefaultEnumerationBudget);

/// Frequency distribution of `samples` sampled walks.
WalkDistribution empirical_walk_distribution(const HeteroGraph& graph, NodeId start,
                                             std::uint32_t length, WalkMode mode,
                                             std::uint64_t samples, Rng& rng);

/// 0.5 * sum |p - q| over the union of supports.
double total_variation(const WalkDistribution& p, const WalkDistribution& q);

/// TSV: token, probability (17 significant digits), descending probability.
void write_distribution(const WalkDistribution& dist, const std::filesystem::path& path);

}  // namespace hawe

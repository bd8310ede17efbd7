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

namespace hawe {

using NodeId = std::uint32_t;
using TypeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

inline constexpr std::int32_t kNoLabel = -1;

/// Spreadsheet-style letter code for a type id: 0 -> "A", 25 -> "Z",
/// 26 -> "AA". Used for generated type names and for canonical token strings.
std::string type_code(TypeId type);

/// Undirected simple graph with dense node ids and one type per node.
///
/// Adjacency is stored in CSR form with each neighbor list sorted ascending.
/// Instances are immutable once built and may be shared across threads.
class HeteroGraph {
 public:
  HeteroGraph() = default;

  /// Builds the graph from an edge list. Edges are symmetrized and
  /// deduplicated; self-loops and out-of-range endpoints throw
  /// std::invalid_argument, as does a type id >= type_names.size().
  HeteroGraph(std::vector<TypeId> node_types, std::vector<std::string> type_names,
              std::span<const Edge> edges);

  std::size_t num_nodes() const noexcept { return node_types_.size(); }
  std::size_t num_edges() const noexcept { return targets_.size() / 2; }
  std::size_t num_types() const noexcept { return type_names_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const;

  TypeId type(NodeId v) const { return node_types_[v]; }
  std::span<const TypeId> node_types() const noexcept { return node_types_; }
  const std::vector<std::string>& type_names() const noexcept { return type_names_; }

  /// Undirected edges as (u, v) with u < v, ascending.
  std::vector<Edge> edges() const;

  /// Original (file) ids. Defaults to the decimal node index.
  const std::string& raw_id(NodeId v) const { return raw_ids_[v]; }
  const std::vector<std::string>& raw_ids() const noexcept { return raw_ids_; }
  std::optional<NodeId> find(std::string_view raw) const;
  void set_raw_ids(std::vector<std::string> raw_ids);

  /// Per-node class ids (kNoLabel when unlabeled) and their display names.
  bool has_labels() const noexcept { return !labels_.empty(); }
  std::span<const std::int32_t> labels() const noexcept { return labels_; }
  const std::vector<std::string>& label_names() const noexcept { return label_names_; }
  void set_labels(std::vector<std::int32_t> labels, std::vector<std::string> label_names);

  /// Full invariant scan: symmetry, no self-loops, sorted unique neighbor
  /// lists, ids and type ids in range. Throws std::logic_error on violation.
  void validate() const;

  friend bool operator==(const HeteroGraph& a, const HeteroGraph& b) {
    return a.offsets_ == b.offsets_ && a.targets_ == b.targets_ &&
           a.node_types_ == b.node_types_ && a.type_names_ == b.type_names_ &&
           a.raw_ids_ == b.raw_ids_ && a.labels_ == b.labels_ &&
           a.label_names_ == b.label_names_;
  }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<TypeId> node_types_;
  std::vector<std::string> type_names_;
  std::vector<std::string> raw_ids_;
  std::unordered_map<std::string, NodeId> raw_index_;
  std::vector<std::int32_t> labels_;
  std::vector<std::string> label_names_;
};

/// Ground-truth structural roles: typed 1-WL equivalence classes.
struct RoleLabeling {
  std::vector<std::uint32_t> roles;
  std::uint32_t num_roles = 0;
};

// ---- File IO -------------------------------------------------------------

/// Parsed nodes.tsv: raw_id, type_name, optional class_label per line.
struct NodeTable {
  std::vector<std::string> raw_ids;
  std::vector<TypeId> node_types;
  std::vector<std::string> type_names;
  std::vector<std::int32_t> labels;  // empty when no line carries a label
  std::vector<std::string> label_names;
};

NodeTable load_node_table(const std::filesystem::path& node_file);

/// Reads nodes.tsv and edges.tsv. Node ids are densified in file order.
/// Throws InputError naming the file and line on malformed input.
HeteroGraph load_graph(const std::filesystem::path& node_file,
                       const std::filesystem::path& edge_file);

void write_graph(const HeteroGraph& graph, const std::filesystem::path& node_file,
                 const std::filesystem::path& edge_file);

/// roles.tsv: raw_id, role_id.
void write_roles(const HeteroGraph& graph, const RoleLabeling& roles,
                 const std::filesystem::path& path);

/// Reads a two-column raw_id/label TSV and maps it onto the graph's nodes.
/// Nodes missing from the file get kNoLabel. Returns (labels, label names).
std::pair<std::vector<std::int32_t>, std::vector<std::string>> load_label_file(
    const HeteroGraph& graph, const std::filesystem::path& path);

// ---- Generators ----------------------------------------------------------

/// Hub cycle of `num_blades` nodes, each hub carrying a pendant path of
/// `blade_len` nodes. In heterogeneous mode node type = (blade + depth) mod 2,
/// so neighbouring blades carry mirrored type patterns; `num_blades` must be
/// even. seed == 0 keeps the canonical layout (hubs first, then blades);
/// any other seed relabels node ids with a seeded permutation.
HeteroGraph gen_pinwheel(std::uint32_t num_blades, std::uint32_t blade_len,
                         bool heterogeneous, std::uint64_t seed = 0);

/// G(n, p) with uniformly random node types. Uses geometric edge skipping,
/// so the cost is O(n + m) rather than O(n^2).
HeteroGraph gen_er(std::uint32_t num_nodes, double edge_prob, std::uint32_t num_types,
                   std::uint64_t seed);

/// Barabasi-Albert preferential attachment. With edges_per_node == 1 the
/// result is a tree.
HeteroGraph gen_ba(std::uint32_t num_nodes, std::uint32_t edges_per_node,
                   std::uint32_t num_types, std::uint64_t seed);

// ---- Role oracle ---------------------------------------------------------

/// 1-dimensional Weisfeiler-Lehman colour refinement seeded with node types.
/// Colours are ranked by their signature at every round, so the returned role
/// ids do not depend on node numbering.
RoleLabeling wl_roles(const HeteroGraph& graph, std::uint32_t max_iters = 64);

}  // namespace hawe

#include "hawe/hetgraph.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "hawe/error.hpp"

namespace hawe {

std::string type_code(TypeId type) {
  std::string out;
  std::uint64_t n = static_cast<std::uint64_t>(type) + 1;
  while (n > 0) {
    --n;
    out.push_back(static_cast<char>('A' + n % 26));
    n /= 26;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

HeteroGraph::HeteroGraph(std::vector<TypeId> node_types, std::vector<std::string> type_names,
                         std::span<const Edge> edges)
    : node_types_(std::move(node_types)), type_names_(std::move(type_names)) {
  const auto n = node_types_.size();
  for (TypeId t : node_types_) {
    if (t >= type_names_.size()) throw std::invalid_argument("node type id out of range");
  }

  std::vector<Edge> arcs;
  arcs.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u));
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  offsets_.assign(n + 1, 0);
  for (auto [u, v] : arcs) ++offsets_[u + 1];
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  targets_.reserve(arcs.size());
  for (auto [u, v] : arcs) targets_.push_back(v);

  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
  set_raw_ids(std::move(ids));
}

bool HeteroGraph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> HeteroGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::optional<NodeId> HeteroGraph::find(std::string_view raw) const {
  auto it = raw_index_.find(std::string(raw));
  if (it == raw_index_.end()) return std::nullopt;
  return it->second;
}

void HeteroGraph::set_raw_ids(std::vector<std::string> raw_ids) {
  if (raw_ids.size() != num_nodes()) throw std::invalid_argument("raw id count mismatch");
  std::unordered_map<std::string, NodeId> index;
  index.reserve(raw_ids.size());
  for (NodeId v = 0; v < raw_ids.size(); ++v) {
    if (!index.emplace(raw_ids[v], v).second) {
      throw std::invalid_argument("duplicate raw id '" + raw_ids[v] + "'");
    }
  }
  raw_ids_ = std::move(raw_ids);
  raw_index_ = std::move(index);
}

void HeteroGraph::set_labels(std::vector<std::int32_t> labels,
                             std::vector<std::string> label_names) {
  if (!labels.empty() && labels.size() != num_nodes()) {
    throw std::invalid_argument("label count mismatch");
  }
  for (auto l : labels) {
    if (l != kNoLabel && (l < 0 || static_cast<std::size_t>(l) >= label_names.size())) {
      throw std::invalid_argument("label id out of range");
    }
  }
  labels_ = std::move(labels);
  label_names_ = std::move(label_names);
}

void HeteroGraph::validate() const {
  const auto n = num_nodes();
  if (offsets_.size() != n + 1) throw std::logic_error("offset table size mismatch");
  for (NodeId u = 0; u < n; ++u) {
    if (node_types_[u] >= num_types()) throw std::logic_error("type id out of range");
    auto nb = neighbors(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const NodeId v = nb[i];
      if (v >= n) throw std::logic_error("neighbor id out of range");
      if (v == u) throw std::logic_error("self-loop");
      if (i > 0 && nb[i - 1] >= v) throw std::logic_error("neighbor list not sorted/unique");
      if (!has_edge(v, u)) throw std::logic_error("asymmetric adjacency");
    }
  }
}

// ---- File IO -------------------------------------------------------------

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  if (line.find('\t') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      auto pos = line.find('\t', start);
      fields.push_back(line.substr(start, pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    // trailing empty optional columns are ignored
    while (!fields.empty() && fields.back().empty()) fields.pop_back();
  } else {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ')) ++i;
      auto j = i;
      while (j < line.size() && line[j] != ' ') ++j;
      if (j > i) fields.push_back(line.substr(i, j - i));
      i = j;
    }
  }
  return fields;
}

std::string where(const std::filesystem::path& file, std::size_t line_no) {
  return file.string() + ":" + std::to_string(line_no) + ": ";
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

/// Calls fn(fields, line_no) for each non-blank, non-comment line.
template <class Fn>
void for_each_record(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    if (view.empty() || view.front() == '#') continue;
    if (view.find_first_not_of(" \t") == std::string_view::npos) continue;
    fn(split_fields(view), line_no);
  }
}

template <class Names>
std::int32_t intern(Names& names, std::unordered_map<std::string, std::int32_t>& index,
                    std::string_view name) {
  auto [it, inserted] =
      index.emplace(std::string(name), static_cast<std::int32_t>(names.size()));
  if (inserted) names.emplace_back(name);
  return it->second;
}

}  // namespace

NodeTable load_node_table(const std::filesystem::path& node_file) {
  NodeTable table;
  std::unordered_map<std::string, std::int32_t> type_index, label_index;
  std::unordered_map<std::string, NodeId> node_index;
  bool any_label = false;

  for_each_record(node_file, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() < 2 || f.size() > 3) {
      throw InputError(where(node_file, line_no) +
                       "malformed line: expected raw_id, type_name[, class_label]");
    }
    if (f[0].empty() || f[1].empty()) {
      throw InputError(where(node_file, line_no) + "malformed line: empty raw_id or type_name");
    }
    const auto type = static_cast<TypeId>(intern(table.type_names, type_index, f[1]));
    std::int32_t label = kNoLabel;
    if (f.size() == 3 && !f[2].empty()) {
      label = intern(table.label_names, label_index, f[2]);
      any_label = true;
    }
    auto [it, inserted] =
        node_index.emplace(std::string(f[0]), static_cast<NodeId>(table.raw_ids.size()));
    if (!inserted) {
      const NodeId prev = it->second;
      if (table.node_types[prev] != type) {
        throw InputError(where(node_file, line_no) + "node '" + std::string(f[0]) +
                         "' listed twice with conflicting type");
      }
      if (label != kNoLabel && table.labels[prev] != kNoLabel && table.labels[prev] != label) {
        throw InputError(where(node_file, line_no) + "node '" + std::string(f[0]) +
                         "' listed twice with conflicting class label");
      }
      if (label != kNoLabel) table.labels[prev] = label;
      return;
    }
    table.raw_ids.emplace_back(f[0]);
    table.node_types.push_back(type);
    table.labels.push_back(label);
  });

  if (!any_label) table.labels.clear();
  return table;
}

HeteroGraph load_graph(const std::filesystem::path& node_file,
                       const std::filesystem::path& edge_file) {
  NodeTable table = load_node_table(node_file);
  std::unordered_map<std::string_view, NodeId> index;
  index.reserve(table.raw_ids.size());
  for (NodeId v = 0; v < table.raw_ids.size(); ++v) index.emplace(table.raw_ids[v], v);

  std::vector<Edge> edges;
  for_each_record(edge_file, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() != 2) {
      throw InputError(where(edge_file, line_no) + "malformed line: expected raw_src, raw_dst");
    }
    NodeId ends[2];
    for (int i = 0; i < 2; ++i) {
      auto it = index.find(f[i]);
      if (it == index.end()) {
        throw InputError(where(edge_file, line_no) + "unknown node id '" + std::string(f[i]) +
                         "'");
      }
      ends[i] = it->second;
    }
    if (ends[0] == ends[1]) {
      throw InputError(where(edge_file, line_no) + "self-loop on node '" + std::string(f[0]) +
                       "'");
    }
    edges.emplace_back(ends[0], ends[1]);
  });

  HeteroGraph graph(std::move(table.node_types), std::move(table.type_names), edges);
  graph.set_raw_ids(std::move(table.raw_ids));
  graph.set_labels(std::move(table.labels), std::move(table.label_names));
  return graph;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_graph(const HeteroGraph& graph, const std::filesystem::path& node_file,
                 const std::filesystem::path& edge_file) {
  {
    auto out = open_output(node_file);
    out << "# raw_id\ttype_name\tclass_label\n";
    for (NodeId v = 0; v < graph.num_nodes(); ++v) {
      out << graph.raw_id(v) << '\t' << graph.type_names()[graph.type(v)];
      if (graph.has_labels() && graph.labels()[v] != kNoLabel) {
        out << '\t' << graph.label_names()[static_cast<std::size_t>(graph.labels()[v])];
      }
      out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + node_file.string());
  }
  auto out = open_output(edge_file);
  out << "# raw_src_id\traw_dst_id\n";
  for (auto [u, v] : graph.edges()) out << graph.raw_id(u) << '\t' << graph.raw_id(v) << '\n';
  if (!out) throw std::runtime_error("write failed: " + edge_file.string());
}

void write_roles(const HeteroGraph& graph, const RoleLabeling& roles,
                 const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "# raw_id\trole_id\n";
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    out << graph.raw_id(v) << '\t' << roles.roles[v] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::pair<std::vector<std::int32_t>, std::vector<std::string>> load_label_file(
    const HeteroGraph& graph, const std::filesystem::path& path) {
  std::vector<std::int32_t> labels(graph.num_nodes(), kNoLabel);
  std::vector<std::string> names;
  std::unordered_map<std::string, std::int32_t> index;
  for_each_record(path, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() != 2) throw InputError(where(path, line_no) + "malformed line: expected raw_id, label");
    auto v = graph.find(f[0]);
    if (!v) throw InputError(where(path, line_no) + "unknown node id '" + std::string(f[0]) + "'");
    labels[*v] = intern(names, index, f[1]);
  });
  return {std::move(labels), std::move(names)};
}

}  // namespace hawe

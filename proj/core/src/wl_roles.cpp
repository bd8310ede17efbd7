#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "hawe/hetgraph.hpp"

namespace hawe {

RoleLabeling wl_roles(const HeteroGraph& graph, std::uint32_t max_iters) {
  if (max_iters < 1) throw std::invalid_argument("wl_roles needs max_iters >= 1");
  const auto n = graph.num_nodes();

  // Initial colours are the type ids, re-ranked so unused types leave no gaps.
  std::vector<std::uint32_t> colors(n);
  {
    std::map<TypeId, std::uint32_t> rank;
    for (NodeId v = 0; v < n; ++v) rank.emplace(graph.type(v), 0);
    std::uint32_t next = 0;
    for (auto& [type, id] : rank) id = next++;
    for (NodeId v = 0; v < n; ++v) colors[v] = rank[graph.type(v)];
  }
  std::size_t num_colors = std::set<std::uint32_t>(colors.begin(), colors.end()).size();

  std::vector<std::vector<std::uint32_t>> signatures(n);
  for (std::uint32_t iter = 0; iter < max_iters; ++iter) {
    for (NodeId v = 0; v < n; ++v) {
      auto& sig = signatures[v];
      sig.clear();
      sig.push_back(colors[v]);
      for (NodeId u : graph.neighbors(v)) sig.push_back(colors[u]);
      std::sort(sig.begin() + 1, sig.end());
    }

    std::map<std::vector<std::uint32_t>, std::uint32_t> rank;
    for (const auto& sig : signatures) rank.emplace(sig, 0);
    std::uint32_t next = 0;
    for (auto& [sig, id] : rank) id = next++;

    for (NodeId v = 0; v < n; ++v) colors[v] = rank[signatures[v]];
    // The signature includes the old colour, so the partition can only
    // refine; an unchanged class count means it is stable.
    if (rank.size() == num_colors) break;
    num_colors = rank.size();
  }

  return RoleLabeling{std::move(colors), static_cast<std::uint32_t>(num_colors)};
}

}  // namespace hawe

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hawe/hetgraph.hpp"
#include "hawe/random.hpp"

namespace hawe {

namespace {

std::vector<std::string> letter_names(std::uint32_t num_types) {
  std::vector<std::string> names;
  names.reserve(num_types);
  for (TypeId t = 0; t < num_types; ++t) names.push_back(type_code(t));
  return names;
}

std::vector<TypeId> random_types(std::uint32_t n, std::uint32_t num_types, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  std::vector<TypeId> types(n);
  for (auto& t : types) t = static_cast<TypeId>(rng.below(num_types));
  return types;
}

}  // namespace

HeteroGraph gen_pinwheel(std::uint32_t num_blades, std::uint32_t blade_len, bool heterogeneous,
                         std::uint64_t seed) {
  if (num_blades < 3) throw std::invalid_argument("pinwheel needs num_blades >= 3");
  if (blade_len < 1) throw std::invalid_argument("pinwheel needs blade_len >= 1");
  if (heterogeneous && num_blades % 2 != 0) {
    throw std::invalid_argument("heterogeneous pinwheel needs an even number of blades");
  }

  const std::uint32_t n = num_blades * (blade_len + 1);
  std::vector<TypeId> types(n, 0);
  std::vector<Edge> edges;
  edges.reserve(n);

  for (std::uint32_t b = 0; b < num_blades; ++b) {
    edges.emplace_back(b, (b + 1) % num_blades);
    if (heterogeneous) types[b] = b % 2;
    NodeId prev = b;
    for (std::uint32_t depth = 1; depth <= blade_len; ++depth) {
      const NodeId v = num_blades + b * blade_len + (depth - 1);
      edges.emplace_back(prev, v);
      if (heterogeneous) types[v] = (b + depth) % 2;
      prev = v;
    }
  }

  if (seed != 0) {
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    Rng rng(seed);
    rng.shuffle(perm.begin(), perm.end());
    std::vector<TypeId> permuted(n);
    for (NodeId v = 0; v < n; ++v) permuted[perm[v]] = types[v];
    for (auto& [u, v] : edges) {
      u = perm[u];
      v = perm[v];
    }
    types = std::move(permuted);
  }

  return HeteroGraph(std::move(types), letter_names(heterogeneous ? 2 : 1), edges);
}

HeteroGraph gen_er(std::uint32_t num_nodes, double edge_prob, std::uint32_t num_types,
                   std::uint64_t seed) {
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  }
  if (num_types < 1) throw std::invalid_argument("num_types must be >= 1");

  std::vector<Edge> edges;
  const std::int64_t n = num_nodes;
  if (edge_prob >= 1.0) {
    for (std::int64_t v = 1; v < n; ++v)
      for (std::int64_t w = 0; w < v; ++w) edges.emplace_back(v, w);
  } else if (edge_prob > 0.0) {
    // Batagelj-Brandes skipping over the lower triangle.
    Rng rng(derive_seed(seed, 1));
    const double log_q = std::log1p(-edge_prob);
    edges.reserve(static_cast<std::size_t>(edge_prob * 0.5 * static_cast<double>(n) *
                                           static_cast<double>(n > 0 ? n - 1 : 0) * 1.1) +
                  16);
    std::int64_t v = 1;
    std::int64_t w = -1;
    while (v < n) {
      const double r = rng.uniform();
      w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
      while (w >= v && v < n) {
        w -= v;
        ++v;
      }
      if (v < n) edges.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(w));
    }
  }

  return HeteroGraph(random_types(num_nodes, num_types, seed), letter_names(num_types), edges);
}

HeteroGraph gen_ba(std::uint32_t num_nodes, std::uint32_t edges_per_node,
                   std::uint32_t num_types, std::uint64_t seed) {
  if (edges_per_node < 1) throw std::invalid_argument("edges_per_node must be >= 1");
  if (num_nodes <= edges_per_node) throw std::invalid_argument("num_nodes must exceed edges_per_node");
  if (num_types < 1) throw std::invalid_argument("num_types must be >= 1");

  Rng rng(derive_seed(seed, 1));
  const std::uint32_t m = edges_per_node;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(num_nodes - m) * m);

  // Each endpoint appears once per incident edge, so a uniform draw from this
  // list is a degree-proportional draw.
  std::vector<NodeId> repeated;
  repeated.reserve(2 * static_cast<std::size_t>(num_nodes) * m);

  std::vector<NodeId> targets(m);
  std::iota(targets.begin(), targets.end(), NodeId{0});
  std::vector<char> chosen(num_nodes, 0);

  for (NodeId source = m; source < num_nodes; ++source) {
    for (NodeId t : targets) {
      edges.emplace_back(source, t);
      repeated.push_back(t);
      repeated.push_back(source);
    }
    if (source + 1 == num_nodes) break;

    targets.clear();
    while (targets.size() < m) {
      const NodeId pick = repeated[rng.below(repeated.size())];
      if (!chosen[pick]) {
        chosen[pick] = 1;
        targets.push_back(pick);
      }
    }
    for (NodeId t : targets) chosen[t] = 0;
  }

  return HeteroGraph(random_types(num_nodes, num_types, seed), letter_names(num_types), edges);
}

}  // namespace hawe

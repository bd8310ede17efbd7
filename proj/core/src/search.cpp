#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "hawe/error.hpp"
#include "hawe/evalharness.hpp"

namespace hawe {

NeighborList topk_search(const Matrix& embeddings, std::span<const std::string> ids,
                         std::size_t target, std::size_t k) {
  const std::size_t n = embeddings.rows();
  if (ids.size() != n) throw std::invalid_argument("id count does not match embedding rows");
  if (target >= n) throw std::out_of_range("target row out of range");
  if (k >= n) {
    throw std::invalid_argument("k = " + std::to_string(k) + " must be smaller than the " +
                                std::to_string(n) + " embedded nodes");
  }

  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(n - 1);
  const auto t = embeddings.row(target);
  for (std::size_t r = 0; r < n; ++r) {
    if (r == target) continue;
    const auto v = embeddings.row(r);
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) sum += (v[i] - t[i]) * (v[i] - t[i]);
    dist.emplace_back(sum, r);
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

  NeighborList out;
  out.target = ids[target];
  out.neighbors.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.neighbors.push_back({dist[i].second, ids[dist[i].second], std::sqrt(dist[i].first)});
  }
  return out;
}

NeighborList topk_search(const EmbeddingTable& table, std::string_view target, std::size_t k) {
  const auto it = std::find(table.ids.begin(), table.ids.end(), target);
  if (it == table.ids.end()) {
    throw InputError("unknown target node '" + std::string(target) + "'");
  }
  return topk_search(table.values, table.ids, static_cast<std::size_t>(it - table.ids.begin()), k);
}

void write_neighbors(const NeighborList& list, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "# target=" << list.target << '\n' << "rank\tid\tdistance\n";
  char buf[32];
  for (std::size_t i = 0; i < list.neighbors.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g", list.neighbors[i].distance);
    out << i + 1 << '\t' << list.neighbors[i].id << '\t' << buf << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace hawe

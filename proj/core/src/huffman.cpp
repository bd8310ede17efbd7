#include <algorithm>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "hawe/pvdm.hpp"

namespace hawe {

HuffmanTree build_huffman(std::span<const std::uint64_t> frequencies) {
  const std::size_t leaves = frequencies.size();
  if (leaves == 0) throw std::invalid_argument("cannot build a Huffman tree over an empty lexicon");

  HuffmanTree tree;
  tree.codes.resize(leaves);
  tree.paths.resize(leaves);
  if (leaves == 1) return tree;

  // Tree node ids: leaves are [0, leaves), internal node k is leaves + k.
  // Heap key (frequency, id) makes the merge order fully deterministic.
  using Entry = std::pair<std::uint64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t i = 0; i < leaves; ++i) heap.emplace(frequencies[i], i);

  const std::size_t total = 2 * leaves - 1;
  std::vector<std::size_t> parent(total, 0);
  std::vector<std::uint8_t> branch(total, 0);
  std::size_t next = leaves;
  while (heap.size() > 1) {
    auto [f0, a] = heap.top();
    heap.pop();
    auto [f1, b] = heap.top();
    heap.pop();
    parent[a] = next;
    branch[a] = 0;
    parent[b] = next;
    branch[b] = 1;
    heap.emplace(f0 + f1, next);
    ++next;
  }

  const std::size_t root = total - 1;
  for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
    auto& code = tree.codes[leaf];
    auto& path = tree.paths[leaf];
    for (std::size_t node = leaf; node != root; node = parent[node]) {
      code.push_back(branch[node]);
      path.push_back(static_cast<std::uint32_t>(parent[node] - leaves));
    }
    std::reverse(code.begin(), code.end());
    std::reverse(path.begin(), path.end());
  }
  return tree;
}

}  // namespace hawe

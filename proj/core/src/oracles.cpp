#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "hawe/error.hpp"
#include "hawe/walklang.hpp"

namespace hawe {

BigInt bell(unsigned l) {
  std::vector<BigInt> b{1};
  std::vector<BigInt> binom{1};  // row m-1 of Pascal's triangle
  for (unsigned m = 1; m <= l; ++m) {
    BigInt sum = 0;
    for (unsigned k = 0; k < m; ++k) sum += binom[k] * b[k];
    b.push_back(sum);
    std::vector<BigInt> next(binom.size() + 1);
    next.front() = 1;
    next.back() = 1;
    for (std::size_t k = 1; k < binom.size(); ++k) next[k] = binom[k - 1] + binom[k];
    binom = std::move(next);
  }
  return b[l];
}

namespace {

void check_guard(unsigned l) {
  if (l < 1 || l > kMaxEnumerationLength) {
    throw std::invalid_argument("walk length must lie in [1, " +
                                std::to_string(kMaxEnumerationLength) + "] for enumeration");
  }
}

template <class Visit>
void for_each_aw(unsigned l, Visit&& visit) {
  std::vector<std::uint32_t> seq(l + 1, 0);
  // dfs(i, max_used): fill seq[i..l]
  auto dfs = [&](auto&& self, unsigned i, std::uint32_t max_used) -> void {
    if (i > l) {
      visit(seq, max_used);
      return;
    }
    for (std::uint32_t v = 0; v <= max_used + 1; ++v) {
      if (v == seq[i - 1]) continue;
      seq[i] = v;
      self(self, i + 1, std::max(max_used, v));
    }
  };
  dfs(dfs, 1, 0);
}

}  // namespace

std::vector<AnonWalk> enumerate_aws(unsigned l) {
  check_guard(l);
  std::vector<AnonWalk> out;
  for_each_aw(l, [&](const std::vector<std::uint32_t>& seq, std::uint32_t) {
    out.push_back(AnonWalk{seq});
  });
  return out;
}

HawCount count_haws(unsigned l, unsigned num_types) {
  check_guard(l);
  if (num_types < 1) throw std::invalid_argument("num_types must be >= 1");
  const BigInt types = num_types;
  std::vector<BigInt> powers{1};
  for (unsigned k = 1; k <= l + 1; ++k) powers.push_back(powers.back() * types);

  HawCount count;
  for_each_aw(l, [&](const std::vector<std::uint32_t>&, std::uint32_t max_used) {
    count.exact += powers[max_used + 1];
  });
  count.product_bound = powers[l] * bell(l);
  return count;
}

double WalkDistribution::total() const {
  double sum = 0.0;
  for (const auto& [token, p] : support) sum += p;
  return sum;
}

double WalkDistribution::probability(const std::string& token) const {
  auto it = support.find(token);
  return it == support.end() ? 0.0 : it->second;
}

std::vector<std::pair<std::string, double>> WalkDistribution::ranked() const {
  std::vector<std::pair<std::string, double>> out(support.begin(), support.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

WalkDistribution exact_walk_distribution(const HeteroGraph& graph, NodeId start,
                                         std::uint32_t length, WalkMode mode,
                                         std::uint64_t budget) {
  if (length == 0) throw std::invalid_argument("walk length must be >= 1");
  if (start >= graph.num_nodes()) throw std::invalid_argument("start node out of range");
  if (graph.degree(start) == 0) {
    throw GraphError("cannot walk from isolated node " + graph.raw_id(start));
  }

  TokenRenderer renderer(graph, mode);
  std::unordered_map<std::string, double> acc;
  std::vector<NodeId> path(static_cast<std::size_t>(length) + 1);
  path[0] = start;
  std::uint64_t expanded = 0;

  auto dfs = [&](auto&& self, std::uint32_t depth, double prob) -> void {
    if (depth == length) {
      acc[renderer.render(path)] += prob;
      return;
    }
    auto nb = graph.neighbors(path[depth]);
    const double step = prob / static_cast<double>(nb.size());
    expanded += nb.size();
    if (expanded > budget) {
      throw GraphError("walk enumeration budget of " + std::to_string(budget) +
                       " exceeded; use a shorter length");
    }
    for (NodeId next : nb) {
      path[depth + 1] = next;
      self(self, depth + 1, step);
    }
  };
  dfs(dfs, 0, 1.0);

  WalkDistribution dist;
  for (auto& [token, p] : acc) dist.support.emplace(token, p);
  return dist;
}

WalkDistribution empirical_walk_distribution(const HeteroGraph& graph, NodeId start,
                                             std::uint32_t length, WalkMode mode,
                                             std::uint64_t samples, Rng& rng) {
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  TokenRenderer renderer(graph, mode);
  std::unordered_map<std::string, std::uint64_t> counts;
  std::vector<NodeId> walk;
  for (std::uint64_t s = 0; s < samples; ++s) {
    sample_walk_into(graph, start, length, rng, walk);
    ++counts[renderer.render(walk)];
  }
  WalkDistribution dist;
  for (auto& [token, c] : counts) {
    dist.support.emplace(token, static_cast<double>(c) / static_cast<double>(samples));
  }
  return dist;
}

double total_variation(const WalkDistribution& p, const WalkDistribution& q) {
  double sum = 0.0;
  auto a = p.support.begin();
  auto b = q.support.begin();
  while (a != p.support.end() || b != q.support.end()) {
    if (b == q.support.end() || (a != p.support.end() && a->first < b->first)) {
      sum += a->second;
      ++a;
    } else if (a == p.support.end() || b->first < a->first) {
      sum += b->second;
      ++b;
    } else {
      sum += std::abs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return 0.5 * sum;
}

void write_distribution(const WalkDistribution& dist, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# token\tprobability\n";
  char buf[32];
  for (const auto& [token, p] : dist.ranked()) {
    std::snprintf(buf, sizeof buf, "%.17g", p);
    out << token << '\t' << buf << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace hawe

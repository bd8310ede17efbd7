#include <doctest.h>

#include <cmath>
#include <fstream>

#include "hawe/error.hpp"
#include "hawe/evalharness.hpp"
#include "test_support.hpp"

using namespace hawe;

namespace {

std::vector<std::string> ids_for(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("n" + std::to_string(i));
  return ids;
}

}  // namespace

TEST_CASE("duplicate row ranks first at distance zero") {
  Matrix x(4, 2);
  x(0, 0) = 1.0; x(0, 1) = 2.0;
  x(1, 0) = 5.0; x(1, 1) = 5.0;
  x(2, 0) = 1.0; x(2, 1) = 2.0;
  x(3, 0) = 1.5; x(3, 1) = 2.0;
  const auto ids = ids_for(4);
  const auto r = topk_search(x, ids, 0, 2);
  CHECK(r.target == "n0");
  REQUIRE(r.neighbors.size() == 2);
  CHECK(r.neighbors[0].id == "n2");
  CHECK(r.neighbors[0].distance == 0.0);
  CHECK(r.neighbors[1].id == "n3");
  CHECK(r.neighbors[1].distance == doctest::Approx(0.5));
}

TEST_CASE("full ranking is sorted, excludes the target, and matches brute force") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    Matrix x(n, 3);
    for (double& v : x.data()) v = std::round(rng.uniform(-3.0, 3.0));  // plenty of ties
    const auto ids = ids_for(n);
    const std::size_t target = rng.below(n);
    const auto r = topk_search(x, ids, target, n - 1);
    REQUIRE(r.neighbors.size() == n - 1);
    for (std::size_t i = 0; i < r.neighbors.size(); ++i) {
      CHECK(r.neighbors[i].row != target);
      double d2 = 0.0;
      for (std::size_t j = 0; j < 3; ++j) d2 += std::pow(x(r.neighbors[i].row, j) - x(target, j), 2);
      CHECK(r.neighbors[i].distance == doctest::Approx(std::sqrt(d2)));
      if (i > 0) {
        CHECK(r.neighbors[i - 1].distance <= r.neighbors[i].distance);
        if (r.neighbors[i - 1].distance == r.neighbors[i].distance) {
          CHECK(r.neighbors[i - 1].row < r.neighbors[i].row);
        }
      }
    }
    // The k-prefix of the full ranking is the top-k answer.
    const std::size_t k = 1 + rng.below(n - 1);
    const auto top = topk_search(x, ids, target, k);
    for (std::size_t i = 0; i < k; ++i) CHECK(top.neighbors[i].row == r.neighbors[i].row);
  }
}

TEST_CASE("search preconditions") {
  Matrix x(3, 2);
  const auto ids = ids_for(3);
  CHECK_THROWS_AS(topk_search(x, ids, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(topk_search(x, ids, 3, 1), std::out_of_range);

  EmbeddingTable table;
  table.dim = 2;
  table.ids = ids;
  table.values = x;
  CHECK_NOTHROW(topk_search(table, "n1", 2));
  CHECK_THROWS_AS(topk_search(table, "missing", 1), InputError);
}

TEST_CASE("neighbor TSV") {
  hawe::testing::TempDir dir;
  NeighborList list{"a", {{1, "b", 0.5}, {2, "c", 1.25}}};
  write_neighbors(list, dir / "n.tsv");
  std::ifstream in(dir / "n.tsv");
  std::string all((std::istreambuf_iterator<char>(in)), {});
  CHECK(all == "# target=a\nrank\tid\tdistance\n1\tb\t0.5\n2\tc\t1.25\n");
}

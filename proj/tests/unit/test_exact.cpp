#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "dosnet/exact.hpp"
#include "dosnet/quality.hpp"
#include "support.hpp"

using namespace dosnet;
using dosnet::testing::graph_from;

namespace {

std::uint64_t sum_counts(const ExactDos& d) {
  std::uint64_t s = 0;
  for (const auto& [key, n] : d.counts) s += n;
  return s;
}

}  // namespace

TEST_CASE("Stirling numbers") {
  CHECK(stirling2(3, 2) == 3);
  CHECK(stirling2(4, 2) == 7);
  CHECK(stirling2(5, 3) == 25);
  for (int n = 2; n <= 20; ++n) CHECK(stirling2(n, 2) == (std::uint64_t{1} << (n - 1)) - 1);
}

TEST_CASE("three nodes, two groups") {
  const Graph g = graph_from("0 1\n1 2\n");
  const auto d = enumerate_labellings(g, 2, StructureMatrix::assortative(2));
  CHECK(d.total == 6);
  CHECK(d.set_partitions == 3);
  CHECK(sum_counts(d) == d.total);
}

TEST_CASE("surjective labelling counts") {
  for (int n = 3; n <= 8; ++n) {
    std::string text;
    for (int i = 0; i + 1 < n; ++i) text += std::to_string(i) + " " + std::to_string(i + 1) + "\n";
    const auto d = enumerate_labellings(graph_from(text), 2, StructureMatrix::assortative(2));
    CHECK(d.total == (std::uint64_t{1} << n) - 2);
  }
  const auto p4 = enumerate_labellings(graph_from("0 1\n1 2\n2 3\n"), 2, StructureMatrix::assortative(2));
  CHECK(p4.total == 14);
  const auto k3 = enumerate_labellings(make_erdos_renyi(6, 0.6, 2), 3, StructureMatrix::assortative(3));
  CHECK(k3.total == 6 * stirling2(6, 3));
}

TEST_CASE("single edge, disassortative") {
  const auto d = enumerate_labellings(graph_from("0 1\n"), 2, StructureMatrix::disassortative(2));
  REQUIRE(d.counts.size() == 1);
  CHECK(d.q_max() == doctest::Approx(1.0));
  CHECK(d.counts.begin()->second == 2);
}

TEST_CASE("structure enumeration is closed under negation") {
  const Graph g = make_erdos_renyi(8, 0.5, 3);
  Rng rng(3);
  for (int k : {1, 2, 3}) {
    const auto c = Labelling::random(8, k, rng);
    const auto d = enumerate_structures(g, c);
    CHECK(d.total == (std::uint64_t{1} << (k * (k + 1) / 2)));
    for (const auto& [key, n] : d.counts) {
      const auto it = d.counts.find(-key);
      REQUIRE(it != d.counts.end());
      CHECK(it->second == n);
    }
  }
  const auto one = enumerate_structures(g, Labelling(std::vector<int>(8, 0), 1));
  CHECK(one.total == 2);
  CHECK(one.counts.size() <= 2);
}

TEST_CASE("best structure matches a brute-force search") {
  const Graph g = make_erdos_renyi(9, 0.4, 5);
  Rng rng(5);
  const auto c = Labelling::random(9, 2, rng);
  double best = -10;
  for (int d0 : {-1, 1})
    for (int o : {-1, 1})
      for (int d1 : {-1, 1}) {
        StructureEntries b(2, 2);
        b << d0, o, o, d1;
        best = std::max(best, recompute(g, c, StructureMatrix(b)).q);
      }
  CHECK(enumerate_structures(g, c).q_max() == doctest::Approx(best).epsilon(1e-11));
}

TEST_CASE("the budget is enforced") {
  const Graph g = make_erdos_renyi(12, 0.3, 1);
  CHECK_THROWS_AS(enumerate_labellings(g, 3, StructureMatrix::assortative(3), 1000), std::invalid_argument);
}

TEST_CASE("binned exact DOS is normalized") {
  const Graph g = make_erdos_renyi(10, 0.3, 6);
  const auto d = enumerate_labellings(g, 2, StructureMatrix::assortative(2));
  const auto grid = bin_exact(d, DosGrid(-1.0, 1.0, 50));
  double mass = 0;
  for (int i = 0; i < grid.n_bins(); ++i)
    if (grid.active(i)) mass += std::exp(grid.log_g(i));
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle csv") {
  const auto d = enumerate_labellings(graph_from("0 1\n"), 2, StructureMatrix::disassortative(2));
  std::ostringstream out;
  write_exact_csv(out, d);
  CHECK(out.str() == "q,count\n1,2\n");
}

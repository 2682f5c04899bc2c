#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "dosnet/moves.hpp"
#include "dosnet/quality.hpp"
#include "support.hpp"

using namespace dosnet;
using dosnet::testing::graph_from;

namespace {

bool within_3_sigma(double count, double n, double p) {
  const double sigma = std::sqrt(n * p * (1.0 - p));
  return std::abs(count - n * p) <= 3.0 * sigma;
}

}  // namespace

TEST_CASE("null space names") {
  CHECK(NullSpace::parse("labels") == NullSpace{true, false, false});
  CHECK(NullSpace::parse("labels+cm") == NullSpace{true, true, false});
  CHECK(NullSpace::parse("labels+B") == NullSpace{true, false, true});
  CHECK(NullSpace::parse("labels+cm+B").name() == "labels+cm+B");
  CHECK_THROWS_AS(NullSpace::parse("labels+xyz"), std::invalid_argument);
  CHECK_THROWS_AS(NullSpace::parse("cm"), std::invalid_argument);
}

TEST_CASE("invalid mixes are rejected") {
  const auto both = NullSpace::parse("labels+cm+B");
  CHECK_THROWS(MoveMix{0.7, 0.5}.validate(both));
  CHECK_THROWS(MoveMix{-0.1, 0.5}.validate(both));
  CHECK_THROWS(MoveMix{0.5, 0.5}.validate(NullSpace::parse("labels+B")));
  CHECK_THROWS(MoveMix{0.5, 0.0}.validate(NullSpace::parse("labels")));
  CHECK_NOTHROW(MoveMix{0.2, 0.8}.validate(NullSpace::parse("labels+cm")));
}

TEST_CASE("all-singleton labellings only yield no-ops") {
  Rng rng(1);
  const Labelling c({0, 1}, 2);
  for (int i = 0; i < 1000; ++i) CHECK(std::holds_alternative<NoOp>(propose_label_swap(c, rng)));
}

TEST_CASE("label proposals skip the singleton's node") {
  Rng rng(2);
  const Labelling c({0, 0, 1}, 2);
  int noop = 0, moves = 0;
  for (int i = 0; i < 30'000; ++i) {
    const Move m = propose_label_swap(c, rng);
    if (std::holds_alternative<NoOp>(m)) {
      ++noop;
      continue;
    }
    const auto& s = std::get<LabelSwap>(m);
    REQUIRE(s.node != 2);
    CHECK(s.from == 0);
    CHECK(s.to == 1);
    ++moves;
  }
  CHECK(within_3_sigma(noop, 30'000, 1.0 / 3.0));
}

TEST_CASE("label proposals are symmetric") {
  // P(c -> c') = 1/N * 1/(K-1) whenever neither direction empties a group.
  Rng rng(3);
  const int n = 5, k = 3;
  const Labelling c({0, 0, 1, 1, 2}, k);
  Labelling d = c;
  d.move(0, 1);
  std::map<std::array<int, 3>, int> forward, backward;
  const int draws = 300'000;
  for (int i = 0; i < draws; ++i) {
    if (auto m = propose_label_swap(c, rng); auto* s = std::get_if<LabelSwap>(&m))
      ++forward[{s->node, s->from, s->to}];
    if (auto m = propose_label_swap(d, rng); auto* s = std::get_if<LabelSwap>(&m))
      ++backward[{s->node, s->from, s->to}];
  }
  const double p = 1.0 / (n * (k - 1));
  CHECK(within_3_sigma(forward[{0, 0, 1}], draws, p));
  CHECK(within_3_sigma(backward[{0, 1, 0}], draws, p));
}

TEST_CASE("edge swap proposals use distinct slots and both orientations") {
  Rng rng(4);
  Graph g = graph_from("0 1\n2 3\n");
  int plain = 0;
  std::map<std::array<NodeId, 4>, int> outcomes;
  for (int i = 0; i < 4000; ++i) {
    const auto m = std::get<EdgeSwap>(propose_edge_swap(g, rng));
    REQUIRE(m.e1 != m.e2);
    Graph h = g;
    if (m.reorient_first) h.reorient(m.e1);
    h.swap_endpoints(m.e1, m.e2);
    auto a = h.edge(0), b = h.edge(1);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (b < a) std::swap(a, b);
    ++outcomes[{a[0], a[1], b[0], b[1]}];
    plain += m.reorient_first ? 0 : 1;
  }
  CHECK(outcomes.size() == 2);
  CHECK((outcomes.count({0, 3, 1, 2}) == 1));
  CHECK((outcomes.count({0, 2, 1, 3}) == 1));
  CHECK(within_3_sigma(plain, 4000, 0.5));
}

TEST_CASE("a doubled edge swaps to itself or to two self-loops") {
  Rng rng(5);
  const Graph g = graph_from("0 1\n0 1\n");
  bool fixed = false, loops = false;
  for (int i = 0; i < 200; ++i) {
    const auto m = std::get<EdgeSwap>(propose_edge_swap(g, rng));
    Graph h = g;
    if (m.reorient_first) h.reorient(m.e1);
    h.swap_endpoints(m.e1, m.e2);
    if (h.edge(0)[0] == h.edge(0)[1]) loops = true;
    else fixed = true;
    CHECK(degree_sequence(h) == degree_sequence(g));
  }
  CHECK(fixed);
  CHECK(loops);
}

TEST_CASE("block flips with K = 1 hit the only entry") {
  Rng rng(6);
  const auto b = StructureMatrix::assortative(1);
  for (int i = 0; i < 100; ++i) CHECK(std::get<BlockFlip>(propose_block_flip(b, rng)) == BlockFlip{0, 0});
}

TEST_CASE("block flips with K = 2 are uniform over 3 blocks") {
  Rng rng(7);
  const auto b = StructureMatrix::assortative(2);
  std::map<std::pair<int, int>, int> counts;
  const int draws = 100'000;
  for (int i = 0; i < draws; ++i) {
    const auto f = std::get<BlockFlip>(propose_block_flip(b, rng));
    ++counts[{f.a, f.b}];
  }
  CHECK(counts.size() == 3);
  for (const auto& [block, count] : counts) {
    CHECK(block.first <= block.second);
    CHECK(within_3_sigma(count, draws, 1.0 / 3.0));
  }
}

TEST_CASE("flip then flip restores B") {
  Rng rng(8);
  auto b = dosnet::testing::random_structure(4, rng);
  const auto orig = b;
  for (int i = 0; i < 50; ++i) {
    const auto f = std::get<BlockFlip>(propose_block_flip(b, rng));
    b.flip(f.a, f.b);
    b.flip(f.a, f.b);
    CHECK(b == orig);
  }
}

namespace {

std::array<int, 3> type_counts(const MoveMix& mix, const std::string& null, int draws) {
  Rng rng(9);
  const Graph g = make_erdos_renyi(15, 0.4, 12);
  PartitionState state(g, Labelling::random(15, 3, rng), StructureMatrix::assortative(3), NullSpace::parse(null),
                       mix);
  std::array<int, 3> counts{};
  for (int i = 0; i < draws; ++i) {
    const Move m = state.propose(rng);
    if (std::holds_alternative<LabelSwap>(m) || std::holds_alternative<NoOp>(m)) ++counts[0];
    else if (std::holds_alternative<EdgeSwap>(m)) ++counts[1];
    else ++counts[2];
  }
  return counts;
}

}  // namespace

TEST_CASE("pure label mix") {
  const auto c = type_counts({1.0, 0.0}, "labels", 10'000);
  CHECK(c[0] == 10'000);
}

TEST_CASE("swap and rewire frequencies") {
  const int n = 100'000;
  const auto c = type_counts({0.2, 0.8}, "labels+cm", n);
  CHECK(within_3_sigma(c[0], n, 0.2));
  CHECK(within_3_sigma(c[1], n, 0.8));
  CHECK(c[2] == 0);
}

TEST_CASE("residual mass goes to flips") {
  const int n = 100'000;
  const auto c = type_counts({0.2, 0.2}, "labels+cm+B", n);
  CHECK(within_3_sigma(c[2], n, 0.6));
  CHECK(within_3_sigma(c[0], n, 0.2));
}

TEST_CASE("partition state tracks Q through mixed moves") {
  Rng rng(10);
  const Graph g = make_erdos_renyi(14, 0.35, 2);
  PartitionState state(g, Labelling::random(14, 3, rng), StructureMatrix::assortative(3),
                       NullSpace::parse("labels+cm+B"), {0.3, 0.3});
  const auto degrees = degree_sequence(g);
  for (int i = 0; i < 20'000; ++i) {
    const Move m = state.propose(rng);
    state.apply(m, state.delta(m));
  }
  CHECK(std::abs(state.q() - state.recomputed_q()) < 1e-10);
  CHECK(degree_sequence(state.graph()) == degrees);
}

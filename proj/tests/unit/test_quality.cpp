#include <doctest.h>

#include <cmath>

#include "dosnet/quality.hpp"
#include "support.hpp"

using namespace dosnet;
using dosnet::testing::graph_from;
using dosnet::testing::random_structure;
using dosnet::testing::two_triangles;

namespace {

StructureMatrix matrix2(int d, int o) {
  StructureEntries b(2, 2);
  b << d, o, o, d;
  return StructureMatrix(b);
}

}  // namespace

TEST_CASE("single edge, disassortative") {
  const Graph g = graph_from("0 1");
  const Labelling c({0, 1}, 2);
  CHECK(recompute(g, c, matrix2(-1, 1)).q == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(recompute(g, c, matrix2(1, -1)).q == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("two triangles joined by an edge") {
  const Graph g = two_triangles();
  const Labelling c({0, 0, 0, 1, 1, 1}, 2);
  const auto st = recompute(g, c, StructureMatrix::assortative(2));
  CHECK(st.s(0, 0) == 6);
  CHECK(st.s(1, 1) == 6);
  CHECK(st.s(0, 1) == 1);
  CHECK(st.t(0) == 7);
  CHECK(st.two_e == 14);
  CHECK(st.q == doctest::Approx(10.0 / 14.0).epsilon(1e-14));
}

TEST_CASE("block statistics sum to 2E") {
  Rng rng(2);
  const Graph g = make_erdos_renyi(12, 0.4, 9);
  const auto c = Labelling::random(12, 3, rng);
  const auto [s, t] = block_statistics(g, c);
  CHECK(s.sum() == g.two_e());
  CHECK(t.sum() == g.two_e());
  CHECK(s == s.transpose());
}

TEST_CASE("singleton label moves are illegal") {
  const Graph edge = graph_from("0 1");
  const Labelling c({0, 1}, 2);
  const auto b = StructureMatrix::assortative(2);
  const auto st = recompute(edge, c, b);
  CHECK_THROWS_AS(delta_q_label_swap(st, edge, c, b, 1, 1, 0), std::logic_error);
  const Graph tri = graph_from("0 1\n1 2\n2 0");
  const Labelling ct({0, 0, 1}, 2);
  CHECK_THROWS_AS(delta_q_label_swap(recompute(tri, ct, b), tri, ct, b, 2, 1, 0), std::logic_error);
}

TEST_CASE("label swap delta matches recompute on random instances") {
  Rng rng(17);
  for (int inst = 0; inst < 40; ++inst) {
    const Graph g = make_erdos_renyi(12, 0.3, 100 + inst);
    if (g.n_edges() == 0) continue;
    const int k = 2 + static_cast<int>(rng.below(3));
    Labelling c = Labelling::random(12, k, rng);
    const auto b = random_structure(k, rng);
    auto st = recompute(g, c, b);
    for (int step = 0; step < 200; ++step) {
      const auto node = static_cast<NodeId>(rng.below(12));
      const int from = c[node];
      if (c.group_size(from) == 1) continue;
      int to = static_cast<int>(rng.below(k - 1));
      if (to >= from) ++to;
      const double dq = delta_q_label_swap(st, g, c, b, node, from, to);
      const double before = recompute<long double>(g, c, b).q;
      apply_label_swap(st, g, c, b, node, to, dq);
      const double after = recompute<long double>(g, c, b).q;
      REQUIRE(std::abs(dq - (after - before)) < 1e-10);
      REQUIRE(std::abs(st.q - after) < 1e-10);
      REQUIRE(st.s == recompute(g, c, b).s);
    }
  }
}

TEST_CASE("label swap delta handles self-loops and multi-edges") {
  const Graph g = graph_from("0 0\n0 1\n0 1\n1 2\n2 2\n2 3\n3 0\n");
  Labelling c({0, 0, 1, 1}, 2);
  const auto b = StructureMatrix::assortative(2);
  auto st = recompute(g, c, b);
  for (NodeId node : {0, 2, 1, 3}) {
    const int from = c[node];
    if (c.group_size(from) == 1) continue;
    const double dq = delta_q_label_swap(st, g, c, b, node, from, 1 - from);
    const double before = st.q;
    apply_label_swap(st, g, c, b, node, 1 - from, dq);
    CHECK(recompute(g, c, b).q - before == doctest::Approx(dq).epsilon(1e-12));
  }
}

TEST_CASE("edge swap within one label is neutral") {
  const Graph g = graph_from("0 1\n2 3\n1 2\n");
  const Labelling c({0, 0, 0, 0}, 1);
  const StructureMatrix b = StructureMatrix::assortative(1);
  CHECK(delta_q_edge_swap(recompute(g, c, b), g, c, b, 0, 1) == 0.0);
}

TEST_CASE("edge swap between two internal edges") {
  // (i,j) in group 0 and (k,l) in group 1; rewiring makes both external
  const Graph g = graph_from("0 1\n2 3\n1 2\n");
  const Labelling c({0, 0, 1, 1}, 2);
  const auto b = StructureMatrix::assortative(2);
  const auto st = recompute(g, c, b);
  const double dq = delta_q_edge_swap(st, g, c, b, 0, 1);
  CHECK(dq == doctest::Approx(-8.0 / 6.0).epsilon(1e-14));
  Graph h = g;
  h.swap_endpoints(0, 1);
  CHECK(recompute(h, c, b).q - st.q == doctest::Approx(dq).epsilon(1e-14));
}

TEST_CASE("edge swap delta matches recompute with both orientations") {
  Rng rng(23);
  for (int inst = 0; inst < 20; ++inst) {
    Graph g = make_erdos_renyi(12, 0.35, 300 + inst);
    if (g.n_edges() < 2) continue;
    const int k = 2 + static_cast<int>(rng.below(3));
    const Labelling c = Labelling::random(12, k, rng);
    const auto b = random_structure(k, rng);
    auto st = recompute(g, c, b);
    for (int step = 0; step < 200; ++step) {
      const auto e1 = static_cast<EdgeSlot>(rng.below(g.n_edges()));
      auto e2 = static_cast<EdgeSlot>(rng.below(g.n_edges() - 1));
      if (e2 >= e1) ++e2;
      const bool flip = rng.coin();
      const double dq = delta_q_edge_swap(st, g, c, b, e1, e2, flip);
      const double before = recompute<long double>(g, c, b).q;
      apply_edge_swap(st, g, c, b, e1, e2, flip, dq);
      const double after = recompute<long double>(g, c, b).q;
      REQUIRE(std::abs(dq - (after - before)) < 1e-10);
      REQUIRE(st.s == recompute(g, c, b).s);
    }
  }
}

TEST_CASE("block flip on a single edge") {
  const Graph g = graph_from("0 1");
  const Labelling c({0, 1}, 2);
  auto b = StructureMatrix::assortative(2);
  auto st = recompute(g, c, b);
  CHECK(st.q == doctest::Approx(-1.0));
  const double dq = delta_q_block_flip(st, b, 0, 1);
  CHECK(dq == doctest::Approx(1.0).epsilon(1e-15));
  apply_block_flip(st, b, 0, 1, dq);
  CHECK(recompute(g, c, b).q == doctest::Approx(0.0));
  CHECK(st.q == doctest::Approx(0.0));
}

TEST_CASE("flipping a block twice is neutral") {
  Rng rng(4);
  const Graph g = make_erdos_renyi(10, 0.4, 3);
  const Labelling c = Labelling::random(10, 3, rng);
  auto b = random_structure(3, rng);
  auto st = recompute(g, c, b);
  const double q0 = st.q;
  const double d1 = delta_q_block_flip(st, b, 1, 2);
  apply_block_flip(st, b, 1, 2, d1);
  const double d2 = delta_q_block_flip(st, b, 1, 2);
  apply_block_flip(st, b, 1, 2, d2);
  CHECK(d1 + d2 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(st.q == doctest::Approx(q0).epsilon(1e-15));
}

TEST_CASE("an empty block flips for free") {
  QualityState st;
  st.two_e = 6;
  st.s = CountMatrix::Zero(2, 2);
  st.s(0, 0) = 6;
  st.t = CountVector::Zero(2);
  st.t(0) = 6;
  const auto b = StructureMatrix::assortative(2);
  CHECK(delta_q_block_flip(st, b, 0, 1) == 0.0);
  CHECK(delta_q_block_flip(st, b, 1, 1) == 0.0);
}

TEST_CASE("block flip delta matches recompute") {
  Rng rng(31);
  for (int inst = 0; inst < 20; ++inst) {
    const Graph g = make_erdos_renyi(11, 0.4, 500 + inst);
    if (g.n_edges() == 0) continue;
    const int k = 1 + static_cast<int>(rng.below(4));
    const Labelling c = Labelling::random(11, k, rng);
    auto b = random_structure(k, rng);
    auto st = recompute(g, c, b);
    for (int step = 0; step < 50; ++step) {
      const int a = static_cast<int>(rng.below(k));
      const int x = static_cast<int>(rng.below(k));
      const double dq = delta_q_block_flip(st, b, a, x);
      const double before = recompute<long double>(g, c, b).q;
      apply_block_flip(st, b, a, x, dq);
      REQUIRE(std::abs(recompute<long double>(g, c, b).q - before - dq) < 1e-12);
    }
  }
}

TEST_CASE("negating B negates Q") {
  Rng rng(8);
  const Graph g = make_erdos_renyi(12, 0.3, 77);
  const auto c = Labelling::random(12, 3, rng);
  const auto b = random_structure(3, rng);
  CHECK(recompute(g, c, -b).q == doctest::Approx(-recompute(g, c, b).q).epsilon(1e-14));
}

TEST_CASE("|Q| never exceeds 2") {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const Graph g = make_erdos_renyi(10, 0.5, 900 + t);
    if (g.n_edges() == 0) continue;
    const int k = 1 + static_cast<int>(rng.below(5));
    const auto c = Labelling::random(10, k, rng);
    CHECK(std::abs(recompute(g, c, random_structure(k, rng)).q) <= 2.0 + 1e-12);
  }
}

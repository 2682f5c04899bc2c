#include "dosnet/quality.hpp"

namespace dosnet {

namespace {

void bump_applies(QualityState& state, const StructureMatrix& b) {
  if (++state.applies % kRefreshInterval == 0)
    state.q = quality_from_blocks<double>(state.s, state.t, state.two_e, b.entries());
}

void add_pair(CountMatrix& s, int a, int x, Count amount) {
  s(a, x) += amount;
  s(x, a) += amount;
}

}  // namespace

std::pair<CountMatrix, CountVector> block_statistics(const Graph& g, const Labelling& c) {
  const int k = c.k();
  CountMatrix s = CountMatrix::Zero(k, k);
  CountVector t = CountVector::Zero(k);
  for (const auto& [u, v] : g.edges()) add_pair(s, c[u], c[v], 1);
  for (NodeId i = 0; i < g.n_nodes(); ++i) t(c[i]) += g.degree(i);
  return {std::move(s), std::move(t)};
}

Count node_links(const Graph& g, const Labelling& c, NodeId node, CountVector& links) {
  links.setZero(c.k());
  Count self = 0;
  for (const auto& inc : g.incident(node)) {
    const NodeId other = g.edge(inc.edge)[1 - inc.side];
    if (other == node) {
      ++self;
    } else {
      ++links(c[other]);
    }
  }
  return self;
}

double delta_q_label_swap(const QualityState& state, const Graph& g, const Labelling& c,
                          const StructureMatrix& b, NodeId node, int from, int to) {
  if (c[node] != from || from == to) throw std::logic_error("label swap: bad source/target group");
  if (c.group_size(from) <= 1) throw std::logic_error("label swap would empty a group");

  thread_local CountVector links;
  const Count self = node_links(g, c, node, links);
  const double two_e = static_cast<double>(state.two_e);
  const double k_i = static_cast<double>(g.degree(node));

  double cross = 0.0;
  for (int x = 0; x < c.k(); ++x) {
    const double excess = static_cast<double>(links(x)) - k_i * static_cast<double>(state.t(x)) / two_e;
    cross += excess * (b(to, x) - b(from, x));
  }
  const double loops = static_cast<double>(self) * (b(to, to) - b(from, from));
  const double square = k_i * k_i / two_e * (b(from, from) + b(to, to) - 2 * b(from, to));
  return (2.0 * cross + loops - square) / two_e;
}

double delta_q_edge_swap(const QualityState& state, const Graph& g, const Labelling& c,
                         const StructureMatrix& b, EdgeSlot e1, EdgeSlot e2, bool reorient_first) {
  if (e1 == e2) throw std::logic_error("edge swap needs two distinct slots");
  auto [i, j] = g.edge(e1);
  if (reorient_first) std::swap(i, j);
  const auto [k, l] = g.edge(e2);
  const int gain = b(c[i], c[l]) + b(c[k], c[j]) - b(c[i], c[j]) - b(c[k], c[l]);
  return 2.0 * gain / static_cast<double>(state.two_e);
}

double delta_q_block_flip(const QualityState& state, const StructureMatrix& b, int a, int x) {
  const double two_e = static_cast<double>(state.two_e);
  const double surplus = static_cast<double>(state.s(a, x)) -
                         static_cast<double>(state.t(a)) * static_cast<double>(state.t(x)) / two_e;
  const double multiplicity = a == x ? 1.0 : 2.0;
  return -2.0 * b(a, x) * multiplicity * surplus / two_e;
}

void apply_label_swap(QualityState& state, const Graph& g, Labelling& c, const StructureMatrix& b,
                      NodeId node, int to, double dq) {
  const int from = c[node];
  thread_local CountVector links;
  const Count self = node_links(g, c, node, links);
  c.move(node, to);
  for (int x = 0; x < c.k(); ++x) {
    add_pair(state.s, from, x, -links(x));
    add_pair(state.s, to, x, links(x));
  }
  state.s(from, from) -= self;
  state.s(to, to) += self;
  state.t(from) -= g.degree(node);
  state.t(to) += g.degree(node);
  state.q += dq;
  bump_applies(state, b);
}

void apply_edge_swap(QualityState& state, Graph& g, const Labelling& c, const StructureMatrix& b,
                     EdgeSlot e1, EdgeSlot e2, bool reorient_first, double dq) {
  if (e1 == e2) throw std::logic_error("edge swap needs two distinct slots");
  if (reorient_first) g.reorient(e1);
  const auto [i, j] = g.edge(e1);
  const auto [k, l] = g.edge(e2);
  add_pair(state.s, c[i], c[j], -1);
  add_pair(state.s, c[k], c[l], -1);
  add_pair(state.s, c[i], c[l], 1);
  add_pair(state.s, c[k], c[j], 1);
  g.swap_endpoints(e1, e2);
  state.q += dq;
  bump_applies(state, b);
}

void apply_block_flip(QualityState& state, StructureMatrix& b, int a, int x, double dq) {
  b.flip(a, x);
  state.q += dq;
  bump_applies(state, b);
}

}  // namespace dosnet

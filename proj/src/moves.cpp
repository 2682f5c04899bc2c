#include "dosnet/moves.hpp"

#include <sstream>
#include <stdexcept>

namespace dosnet {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

NullSpace NullSpace::parse(const std::string& text) {
  NullSpace null{false, false, false};
  std::stringstream parts(text);
  std::string part;
  while (std::getline(parts, part, '+')) {
    if (part == "labels" || part == "c") {
      null.labels = true;
    } else if (part == "cm") {
      null.rewire = true;
    } else if (part == "B" || part == "b") {
      null.structure = true;
    } else {
      throw std::invalid_argument("unknown null space component '" + part + "'");
    }
  }
  if (!null.labels) throw std::invalid_argument("null space must include labels");
  return null;
}

std::string NullSpace::name() const {
  std::string out = "labels";
  if (rewire) out += "+cm";
  if (structure) out += "+B";
  return out;
}

MoveMix MoveMix::defaults_for(const NullSpace& null) {
  if (null.rewire && null.structure) return {0.2, 0.4};
  if (null.rewire) return {0.2, 0.8};
  if (null.structure) return {0.2, 0.0};
  return {1.0, 0.0};
}

void MoveMix::validate(const NullSpace& null) const {
  constexpr double kSlack = 1e-12;
  if (!(p_swap >= 0.0) || !(p_rewire >= 0.0) || p_swap + p_rewire > 1.0 + kSlack)
    throw std::invalid_argument("move mix needs p_swap, p_rewire >= 0 and p_swap + p_rewire <= 1");
  if (p_rewire > 0.0 && !null.rewire)
    throw std::invalid_argument("rewiring moves requested but the null space has no cm component");
  if (p_flip() > kSlack && !null.structure)
    throw std::invalid_argument("structure flips requested but the null space has no B component");
  if (p_swap > 0.0 && !null.labels)
    throw std::invalid_argument("label moves requested but labels are fixed");
}

Move propose_label_swap(const Labelling& c, Rng& rng) {
  const auto node = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(c.n_nodes())));
  const int from = c[node];
  if (c.group_size(from) <= 1) return NoOp{};
  const auto r = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.k() - 1)));
  return LabelSwap{node, from, r < from ? r : r + 1};
}

Move propose_edge_swap(const Graph& g, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(g.n_edges());
  if (n < 2) throw std::invalid_argument("edge swap needs at least two edges");
  const auto e1 = static_cast<EdgeSlot>(rng.below(n));
  auto e2 = static_cast<EdgeSlot>(rng.below(n - 1));
  if (e2 >= e1) ++e2;
  return EdgeSwap{e1, e2, rng.coin()};
}

Move propose_block_flip(const StructureMatrix& b, Rng& rng) {
  const int k = b.k();
  auto r = static_cast<int>(rng.below(static_cast<std::uint64_t>(k) * (k + 1) / 2));
  // Row a holds the k - a blocks (a, a..k-1).
  int a = 0;
  while (r >= k - a) {
    r -= k - a;
    ++a;
  }
  return BlockFlip{a, a + r};
}

Move propose_mixed(const MoveMix& mix, const PartitionState& state, Rng& rng) {
  const double u = rng.uniform();
  if (u < mix.p_swap) return propose_label_swap(state.labels(), rng);
  const NullSpace& null = state.null_space();
  if (u < mix.p_swap + mix.p_rewire || !null.structure) {
    // Rounding in 1 - p_swap - p_rewire must not leak flips into a fixed-B null.
    return null.rewire ? propose_edge_swap(state.graph(), rng)
                       : propose_label_swap(state.labels(), rng);
  }
  return propose_block_flip(state.structure(), rng);
}

PartitionState::PartitionState(Graph g, Labelling c, StructureMatrix b, NullSpace null, MoveMix mix)
    : graph_(std::move(g)),
      labels_(std::move(c)),
      structure_(std::move(b)),
      null_(null),
      mix_(mix) {
  mix_.validate(null_);
  if (mix_.p_swap > 0.0 && labels_.k() < 2)
    throw std::invalid_argument("label moves need K >= 2");
  if (mix_.p_rewire > 0.0 && graph_.n_edges() < 2)
    throw std::invalid_argument("rewiring needs at least two edges");
  quality_ = recompute(graph_, labels_, structure_);
}

Move PartitionState::propose(Rng& rng) const { return propose_mixed(mix_, *this, rng); }

double PartitionState::delta(const Move& move) const {
  return std::visit(
      Overloaded{
          [](const NoOp&) { return 0.0; },
          [this](const LabelSwap& m) {
            return delta_q_label_swap(quality_, graph_, labels_, structure_, m.node, m.from, m.to);
          },
          [this](const EdgeSwap& m) {
            return delta_q_edge_swap(quality_, graph_, labels_, structure_, m.e1, m.e2,
                                     m.reorient_first);
          },
          [this](const BlockFlip& m) { return delta_q_block_flip(quality_, structure_, m.a, m.b); },
      },
      move);
}

void PartitionState::apply(const Move& move, double dq) {
  std::visit(Overloaded{
                 [](const NoOp&) {},
                 [&](const LabelSwap& m) {
                   apply_label_swap(quality_, graph_, labels_, structure_, m.node, m.to, dq);
                 },
                 [&](const EdgeSwap& m) {
                   apply_edge_swap(quality_, graph_, labels_, structure_, m.e1, m.e2,
                                   m.reorient_first, dq);
                 },
                 [&](const BlockFlip& m) { apply_block_flip(quality_, structure_, m.a, m.b, dq); },
             },
             move);
}

double PartitionState::recomputed_q() const { return recompute(graph_, labels_, structure_).q; }

void PartitionState::refresh() { quality_ = recompute(graph_, labels_, structure_); }

}  // namespace dosnet

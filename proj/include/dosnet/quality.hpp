#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "dosnet/graph.hpp"
#include "dosnet/partition.hpp"

namespace dosnet {

using CountMatrix = Eigen::Matrix<Count, Eigen::Dynamic, Eigen::Dynamic>;
using CountVector = Eigen::Matrix<Count, Eigen::Dynamic, 1>;

/// Generalized modularity from block statistics:
///   Q = (1/2E) sum_ab (S_ab - T_a T_b / 2E) B_ab
template <typename Scalar, typename DerivedS, typename DerivedT, typename DerivedB>
Scalar quality_from_blocks(const Eigen::MatrixBase<DerivedS>& s, const Eigen::MatrixBase<DerivedT>& t,
                           Count two_e, const Eigen::MatrixBase<DerivedB>& b) {
  const auto norm = static_cast<Scalar>(two_e);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tf = t.template cast<Scalar>();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> surplus =
      s.template cast<Scalar>() - (tf * tf.transpose()) / norm;
  return surplus.cwiseProduct(b.template cast<Scalar>()).sum() / norm;
}

/// S (block edge-end sums, self-loops adding 2 on the diagonal) and T (group
/// degree sums) for labelling `c`.
std::pair<CountMatrix, CountVector> block_statistics(const Graph& g, const Labelling& c);

/// Sufficient statistics for O(K) move evaluation, plus the running Q.
template <typename Scalar>
struct BasicQualityState {
  CountMatrix s;
  CountVector t;
  Count two_e = 0;
  Scalar q = 0;
  std::uint64_t applies = 0;
};

using QualityState = BasicQualityState<double>;

/// Stored q is recomputed from (S, T, B) after this many applies.
inline constexpr std::uint64_t kRefreshInterval = 1'000'000;

template <typename Scalar = double>
BasicQualityState<Scalar> recompute(const Graph& g, const Labelling& c, const StructureMatrix& b) {
  if (c.n_nodes() != g.n_nodes()) throw std::invalid_argument("labelling does not match graph");
  if (b.k() != c.k()) throw std::invalid_argument("structure matrix K does not match labelling");
  if (g.two_e() == 0) throw std::invalid_argument("graph has no edges");
  BasicQualityState<Scalar> state;
  std::tie(state.s, state.t) = block_statistics(g, c);
  state.two_e = g.two_e();
  state.q = quality_from_blocks<Scalar>(state.s, state.t, state.two_e, b.entries());
  return state;
}

/// Edge ends from `node` into each group, self-loops excluded. Returns A_ii
/// (twice the number of self-loops at `node`).
Count node_links(const Graph& g, const Labelling& c, NodeId node, CountVector& links);

/// dQ for relabelling `node` from `from` to `to`. Throws std::logic_error if
/// the move is illegal (same group, wrong source, or singleton source).
double delta_q_label_swap(const QualityState& state, const Graph& g, const Labelling& c,
                          const StructureMatrix& b, NodeId node, int from, int to);

/// dQ for (i,j),(k,l) -> (i,l),(k,j). With `reorient_first`, slot e1 is
/// read as (j,i) before the exchange.
double delta_q_edge_swap(const QualityState& state, const Graph& g, const Labelling& c,
                         const StructureMatrix& b, EdgeSlot e1, EdgeSlot e2,
                         bool reorient_first = false);

/// dQ for negating B(a,x) (and B(x,a)).
double delta_q_block_flip(const QualityState& state, const StructureMatrix& b, int a, int x);

void apply_label_swap(QualityState& state, const Graph& g, Labelling& c, const StructureMatrix& b,
                      NodeId node, int to, double dq);
void apply_edge_swap(QualityState& state, Graph& g, const Labelling& c, const StructureMatrix& b,
                     EdgeSlot e1, EdgeSlot e2, bool reorient_first, double dq);
void apply_block_flip(QualityState& state, StructureMatrix& b, int a, int x, double dq);

}  // namespace dosnet

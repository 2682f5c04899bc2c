#pragma once

#include <string>
#include <variant>

#include "dosnet/graph.hpp"
#include "dosnet/partition.hpp"
#include "dosnet/quality.hpp"
#include "dosnet/random.hpp"

namespace dosnet {

struct NoOp {
  bool operator==(const NoOp&) const = default;
};
struct LabelSwap {
  NodeId node;
  int from;
  int to;
  bool operator==(const LabelSwap&) const = default;
};
struct EdgeSwap {
  EdgeSlot e1;
  EdgeSlot e2;
  bool reorient_first;
  bool operator==(const EdgeSwap&) const = default;
};
struct BlockFlip {
  int a;
  int b;
  bool operator==(const BlockFlip&) const = default;
};

using Move = std::variant<NoOp, LabelSwap, EdgeSwap, BlockFlip>;

/// Which components of the state a walk may change.
struct NullSpace {
  bool labels = true;
  bool rewire = false;
  bool structure = false;

  /// "labels", "labels+cm", "labels+B", "labels+cm+B" (component order free).
  static NullSpace parse(const std::string& text);
  std::string name() const;
  bool operator==(const NullSpace&) const = default;
};

/// Move-type probabilities; flips get 1 - p_swap - p_rewire.
struct MoveMix {
  double p_swap = 1.0;
  double p_rewire = 0.0;

  double p_flip() const { return 1.0 - p_swap - p_rewire; }

  /// The mix the CLI uses for a null space when no probabilities are given.
  static MoveMix defaults_for(const NullSpace& null);
  /// Throws std::invalid_argument on bad probabilities or on mass assigned to
  /// a move type the null space does not enable.
  void validate(const NullSpace& null) const;
};

/// Uniform node; NoOp if it is alone in its group, else a uniform other label.
Move propose_label_swap(const Labelling& c, Rng& rng);
/// Two distinct slots uniformly without replacement plus an orientation bit.
Move propose_edge_swap(const Graph& g, Rng& rng);
/// Uniform over the K(K+1)/2 unordered blocks, diagonal included.
Move propose_block_flip(const StructureMatrix& b, Rng& rng);

/// Everything one sampler mutates: a private rewirable graph copy, the
/// labelling, the structure matrix, and the quality statistics.
class PartitionState {
 public:
  PartitionState(Graph g, Labelling c, StructureMatrix b, NullSpace null, MoveMix mix);

  double q() const { return quality_.q; }
  const Graph& graph() const { return graph_; }
  const Labelling& labels() const { return labels_; }
  const StructureMatrix& structure() const { return structure_; }
  const QualityState& quality() const { return quality_; }
  const NullSpace& null_space() const { return null_; }
  const MoveMix& mix() const { return mix_; }

  Move propose(Rng& rng) const;
  double delta(const Move& move) const;
  void apply(const Move& move, double dq);

  /// Full recompute of S, T and q from scratch.
  double recomputed_q() const;
  void refresh();

 private:
  Graph graph_;
  Labelling labels_;
  StructureMatrix structure_;
  QualityState quality_;
  NullSpace null_;
  MoveMix mix_;
};

/// Draw a move type by `mix`, then delegate to the matching proposal.
Move propose_mixed(const MoveMix& mix, const PartitionState& state, Rng& rng);

}  // namespace dosnet

#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "dosnet/graph.hpp"

namespace dosnet {

using StructureEntries = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// Symmetric K x K pattern over {-1, +1}. +1 rewards an edge excess between
/// (or within) groups, -1 a deficit.
class StructureMatrix {
 public:
  StructureMatrix() = default;
  explicit StructureMatrix(StructureEntries b);

  /// +1 on the diagonal, -1 elsewhere.
  static StructureMatrix assortative(int k);
  static StructureMatrix disassortative(int k);

  int k() const { return static_cast<int>(b_.rows()); }
  int operator()(int a, int x) const { return b_(a, x); }
  const StructureEntries& entries() const { return b_; }

  /// Negate B(a,x) and, off the diagonal, B(x,a).
  void flip(int a, int x) {
    b_(a, x) = -b_(a, x);
    if (a != x) b_(x, a) = -b_(x, a);
  }

  /// True when every diagonal entry agrees and every off-diagonal entry
  /// agrees, i.e. Q is invariant under relabelling the groups.
  bool permutation_symmetric() const;

  StructureMatrix operator-() const { return StructureMatrix(StructureEntries(-b_)); }
  bool operator==(const StructureMatrix& other) const { return b_ == other.b_; }

 private:
  StructureEntries b_;
};

/// K lines of K entries; `1`, `-1`, `+1`, or `.` for -1.
StructureMatrix parse_structure(std::istream& in);
/// A preset name (`assortative`, `disassortative`) or a file path.
StructureMatrix load_structure(const std::string& preset_or_path, int k);
void write_structure(std::ostream& out, const StructureMatrix& b);

/// Surjective assignment of nodes to K groups.
class Labelling {
 public:
  Labelling() = default;
  Labelling(std::vector<int> labels, int k);

  /// Uniform random surjective labelling (rejection from uniform ones).
  template <typename Rng>
  static Labelling random(NodeId n, int k, Rng& rng) {
    std::vector<int> labels(n);
    for (;;) {
      std::vector<Count> seen(k, 0);
      for (auto& l : labels) {
        l = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
        ++seen[l];
      }
      bool surjective = true;
      for (Count s : seen) surjective = surjective && s > 0;
      if (surjective) return Labelling(std::move(labels), k);
    }
  }

  int k() const { return static_cast<int>(group_size_.size()); }
  NodeId n_nodes() const { return static_cast<NodeId>(labels_.size()); }
  int operator[](NodeId i) const { return labels_[i]; }
  Count group_size(int a) const { return group_size_[a]; }
  const std::vector<int>& labels() const { return labels_; }

  /// Relabel one node. The node must not be the last member of its group.
  void move(NodeId node, int to);

 private:
  std::vector<int> labels_;
  std::vector<Count> group_size_;
};

/// Whitespace-separated integer labels, one per dense node id.
Labelling load_labelling_file(const std::string& path, NodeId n_nodes, int k);

}  // namespace dosnet

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dosnet {

using NodeId = std::int32_t;
using EdgeSlot = std::int32_t;
using Count = std::int64_t;

/// One end of an edge slot as seen from the node it touches. `side` is the
/// slot position (0 or 1) this node occupies.
struct Incidence {
  EdgeSlot edge;
  std::int32_t side;
};

/// Undirected multigraph with self-loops. A self-loop adds 2 to the degree of
/// its node and appears twice in that node's incidence list.
///
/// The degree sequence is fixed at construction. Endpoints can be exchanged in
/// place between edge slots (`swap_endpoints`), which is the only mutation and
/// keeps every degree unchanged. Incidences are stored CSR-style.
class Graph {
 public:
  Graph() = default;
  Graph(NodeId n_nodes, std::vector<std::array<NodeId, 2>> edges,
        std::vector<std::string> tokens = {});

  NodeId n_nodes() const { return n_nodes_; }
  EdgeSlot n_edges() const { return static_cast<EdgeSlot>(edges_.size()); }
  Count two_e() const { return 2 * static_cast<Count>(edges_.size()); }
  Count degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }

  const std::array<NodeId, 2>& edge(EdgeSlot e) const { return edges_[e]; }
  const std::vector<std::array<NodeId, 2>>& edges() const { return edges_; }

  std::span<const Incidence> incident(NodeId i) const {
    return {incidence_.data() + offsets_[i], incidence_.data() + offsets_[i + 1]};
  }

  /// Node tokens as they appeared in the input, indexed by dense id.
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Reverse the stored orientation of slot `e`.
  void reorient(EdgeSlot e);

  /// (i,j),(k,l) -> (i,l),(k,j): exchange the side-1 endpoints of two slots.
  void swap_endpoints(EdgeSlot e1, EdgeSlot e2);

  /// Edge list text using the original tokens, one edge per line.
  void write_edge_list(std::ostream& out) const;

 private:
  void set_incidence(EdgeSlot e, int side);

  NodeId n_nodes_ = 0;
  std::vector<std::array<NodeId, 2>> edges_;
  std::vector<std::string> tokens_;
  std::vector<Count> offsets_;
  std::vector<Incidence> incidence_;
  // position_[e][s]: index into incidence_ of slot e's side-s entry
  std::vector<std::array<Count, 2>> position_;
};

/// Parse whitespace-separated node pairs; `#` lines and blank lines skipped.
/// Tokens get dense ids in order of first appearance.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);

std::vector<Count> degree_sequence(const Graph& g);

/// Connected caveman graph: `n_cliques` complete graphs of `clique_size`
/// nodes. In each clique the edge (first, second) is dropped and the first
/// node is linked to the last node of the previous clique, closing a ring.
Graph make_caveman(int n_cliques, int clique_size);

/// G(n, p) from a seeded stream, for pinned benchmark instances and tests.
Graph make_erdos_renyi(NodeId n, double p, std::uint64_t seed);

bool is_connected(const Graph& g);

}  // namespace dosnet

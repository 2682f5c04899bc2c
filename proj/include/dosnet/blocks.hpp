#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "dosnet/graph.hpp"

namespace dosnet {

/// W(i,j): fraction of partitions placing i and j in the same group.
/// Every partition must cover the same nodes.
Eigen::MatrixXd co_occurrence(const std::vector<std::vector<int>>& partitions);

/// Disjoint node sets covering all nodes, ordered by their smallest member.
struct BlockSet {
  std::vector<std::vector<NodeId>> blocks;
  double theta = 0.0;

  std::size_t size() const { return blocks.size(); }
  /// Block index per node.
  std::vector<int> membership(NodeId n_nodes) const;
};

/// Connected components of the graph joining i and j whenever W(i,j) > theta.
BlockSet blocks_at_threshold(const Eigen::MatrixXd& w, double theta);

/// Natural-log entropies of a (block, group) pairing.
struct ContingencyEntropies {
  double h_blocks;    // H(C)
  double h_groups;    // H(G)
  double h_joint;     // H(C,G)
  double mutual() const { return h_blocks + h_groups - h_joint; }
};

ContingencyEntropies contingency_entropies(const std::vector<int>& blocks,
                                           const std::vector<int>& groups);

/// Homogeneity, completeness and V-measure of groups G against blocks C.
/// Completeness is 1 when every block sits inside a single group:
///   c = 1 - H(G|C) / H(G)   (1 if H(G) = 0)
///   h = 1 - H(C|G) / H(C)   (1 if H(C) = 0)
///   v = 2hc / (h + c) = 2 I(C,G) / (H(C) + H(G))
struct ScoreTriple {
  double h;
  double c;
  double v;
};

ScoreTriple score(const std::vector<int>& blocks, const std::vector<int>& groups);

struct SweepRow {
  double theta;
  std::size_t n_blocks;
  double mean_completeness;
};

/// theta = i / 100 for i = 0..99.
std::vector<double> default_theta_grid();

std::vector<SweepRow> threshold_sweep(const Eigen::MatrixXd& w,
                                      const std::vector<std::vector<int>>& partitions,
                                      const std::vector<double>& thetas);

double mean_completeness(const BlockSet& blocks, const std::vector<std::vector<int>>& partitions);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// {"theta": t, "blocks": [[tokens...]...], "mean_completeness": x}
void write_blocks_json(std::ostream& out, const BlockSet& blocks, double mean_completeness,
                       const std::vector<std::string>& tokens);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& w);

}  // namespace dosnet

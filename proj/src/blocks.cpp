#include "dosnet/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "dosnet/format.hpp"

namespace dosnet {

namespace {

double entropy_of(const std::map<std::pair<int, int>, std::size_t>& counts, std::size_t total) {
  double h = 0.0;
  for (const auto& [key, n] : counts) {
    const double p = static_cast<double>(n) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

double entropy_of(const std::map<int, std::size_t>& counts, std::size_t total) {
  double h = 0.0;
  for (const auto& [key, n] : counts) {
    const double p = static_cast<double>(n) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

Eigen::MatrixXd co_occurrence(const std::vector<std::vector<int>>& partitions) {
  if (partitions.empty()) throw std::invalid_argument("co-occurrence needs at least one partition");
  const auto n = static_cast<Eigen::Index>(partitions.front().size());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& p : partitions) {
    if (static_cast<Eigen::Index>(p.size()) != n)
      throw std::invalid_argument("partitions cover different node counts");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j)
        if (p[i] == p[j]) w(i, j) += 1.0;
  }
  w /= static_cast<double>(partitions.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) w(i, j) = w(j, i);
  return w;
}

std::vector<int> BlockSet::membership(NodeId n_nodes) const {
  std::vector<int> out(n_nodes, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (NodeId i : blocks[b]) out[i] = static_cast<int>(b);
  return out;
}

BlockSet blocks_at_threshold(const Eigen::MatrixXd& w, double theta) {
  const auto n = static_cast<NodeId>(w.rows());
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (w(i, j) > theta) {
        const NodeId a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  BlockSet out;
  out.theta = theta;
  std::vector<int> index(n, -1);
  for (NodeId i = 0; i < n; ++i) {
    const NodeId root = find(i);
    if (index[root] < 0) {
      index[root] = static_cast<int>(out.blocks.size());
      out.blocks.emplace_back();
    }
    out.blocks[index[root]].push_back(i);
  }
  return out;
}

ContingencyEntropies contingency_entropies(const std::vector<int>& blocks,
                                           const std::vector<int>& groups) {
  if (blocks.empty()) throw std::invalid_argument("cannot score an empty node set");
  if (blocks.size() != groups.size())
    throw std::invalid_argument("blocks and groups cover different node counts");
  std::map<int, std::size_t> nc, ng;
  std::map<std::pair<int, int>, std::size_t> joint;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    ++nc[blocks[i]];
    ++ng[groups[i]];
    ++joint[{blocks[i], groups[i]}];
  }
  const std::size_t total = blocks.size();
  return {entropy_of(nc, total), entropy_of(ng, total), entropy_of(joint, total)};
}

ScoreTriple score(const std::vector<int>& blocks, const std::vector<int>& groups) {
  const auto e = contingency_entropies(blocks, groups);
  // H(G|C) = H(C,G) - H(C); clamp the rounding residue of exact zeros.
  const double g_given_c = std::max(0.0, e.h_joint - e.h_blocks);
  const double c_given_g = std::max(0.0, e.h_joint - e.h_groups);
  ScoreTriple s{};
  s.c = e.h_groups > 0.0 ? std::clamp(1.0 - g_given_c / e.h_groups, 0.0, 1.0) : 1.0;
  s.h = e.h_blocks > 0.0 ? std::clamp(1.0 - c_given_g / e.h_blocks, 0.0, 1.0) : 1.0;
  s.v = s.h + s.c > 0.0 ? 2.0 * s.h * s.c / (s.h + s.c) : 0.0;
  return s;
}

std::vector<double> default_theta_grid() {
  std::vector<double> thetas(100);
  for (int i = 0; i < 100; ++i) thetas[i] = i / 100.0;
  return thetas;
}

double mean_completeness(const BlockSet& blocks, const std::vector<std::vector<int>>& partitions) {
  if (partitions.empty()) throw std::invalid_argument("no partitions to score");
  const auto membership = blocks.membership(static_cast<NodeId>(partitions.front().size()));
  double total = 0.0;
  for (const auto& p : partitions) total += score(membership, p).c;
  return total / static_cast<double>(partitions.size());
}

std::vector<SweepRow> threshold_sweep(const Eigen::MatrixXd& w,
                                      const std::vector<std::vector<int>>& partitions,
                                      const std::vector<double>& thetas) {
  std::vector<SweepRow> rows;
  rows.reserve(thetas.size());
  for (double theta : thetas) {
    if (!(theta >= 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in [0, 1)");
    const BlockSet blocks = blocks_at_threshold(w, theta);
    rows.push_back({theta, blocks.size(), mean_completeness(blocks, partitions)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "theta,n_blocks,mean_completeness\n";
  for (const auto& r : rows)
    out << format_double(r.theta) << ',' << r.n_blocks << ',' << format_double(r.mean_completeness) << '\n';
}

void write_blocks_json(std::ostream& out, const BlockSet& blocks, double mean_completeness,
                       const std::vector<std::string>& tokens) {
  out << "{\"theta\": " << format_double(blocks.theta) << ", \"blocks\": [";
  for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
    out << (b ? ", " : "") << '[';
    for (std::size_t i = 0; i < blocks.blocks[b].size(); ++i) {
      const NodeId node = blocks.blocks[b][i];
      const std::string name =
          node < static_cast<NodeId>(tokens.size()) ? tokens[node] : std::to_string(node);
      out << (i ? ", " : "") << json_string(name);
    }
    out << ']';
  }
  out << "], \"mean_completeness\": " << format_double(mean_completeness) << "}\n";
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& w) {
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) out << (j ? "," : "") << format_double(w(i, j));
    out << '\n';
  }
}

}  // namespace dosnet

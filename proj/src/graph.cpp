#include "dosnet/graph.hpp"

#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "dosnet/errors.hpp"
#include "dosnet/random.hpp"

namespace dosnet {

Graph::Graph(NodeId n_nodes, std::vector<std::array<NodeId, 2>> edges,
             std::vector<std::string> tokens)
    : n_nodes_(n_nodes), edges_(std::move(edges)), tokens_(std::move(tokens)) {
  if (n_nodes_ <= 0) throw std::invalid_argument("graph needs at least one node");
  if (tokens_.empty()) {
    tokens_.reserve(n_nodes_);
    for (NodeId i = 0; i < n_nodes_; ++i) tokens_.push_back(std::to_string(i));
  }
  if (static_cast<NodeId>(tokens_.size()) != n_nodes_)
    throw std::invalid_argument("token table size does not match node count");

  std::vector<Count> deg(n_nodes_, 0);
  for (const auto& [u, v] : edges_) {
    if (u < 0 || u >= n_nodes_ || v < 0 || v >= n_nodes_)
      throw std::invalid_argument("edge endpoint out of range");
    ++deg[u];
    ++deg[v];
  }
  offsets_.assign(n_nodes_ + 1, 0);
  std::partial_sum(deg.begin(), deg.end(), offsets_.begin() + 1);

  incidence_.resize(offsets_.back());
  position_.resize(edges_.size());
  std::vector<Count> fill(offsets_.begin(), offsets_.end() - 1);
  for (EdgeSlot e = 0; e < n_edges(); ++e) {
    for (int side = 0; side < 2; ++side) {
      const NodeId node = edges_[e][side];
      const Count pos = fill[node]++;
      incidence_[pos] = {e, side};
      position_[e][side] = pos;
    }
  }
}

void Graph::set_incidence(EdgeSlot e, int side) {
  incidence_[position_[e][side]] = {e, side};
}

void Graph::reorient(EdgeSlot e) {
  std::swap(edges_[e][0], edges_[e][1]);
  std::swap(position_[e][0], position_[e][1]);
  set_incidence(e, 0);
  set_incidence(e, 1);
}

void Graph::swap_endpoints(EdgeSlot e1, EdgeSlot e2) {
  // Each node keeps its incidence-list entry; only the slot it names changes.
  std::swap(edges_[e1][1], edges_[e2][1]);
  std::swap(position_[e1][1], position_[e2][1]);
  set_incidence(e1, 1);
  set_incidence(e2, 1);
}

void Graph::write_edge_list(std::ostream& out) const {
  for (const auto& [u, v] : edges_) out << tokens_[u] << ' ' << tokens_[v] << '\n';
}

Graph load_edge_list(std::istream& in) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> tokens;
  std::vector<std::array<NodeId, 2>> edges;
  auto intern = [&](const std::string& tok) {
    auto [it, inserted] = ids.try_emplace(tok, static_cast<NodeId>(tokens.size()));
    if (inserted) tokens.push_back(tok);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra))
      throw InputError("expected exactly two node tokens", line_no);
    const NodeId u = intern(a);
    const NodeId v = intern(b);
    edges.push_back({u, v});
  }
  if (edges.empty()) throw InputError("edge list contains no edges");
  const auto n = static_cast<NodeId>(tokens.size());
  return Graph(n, std::move(edges), std::move(tokens));
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  try {
    return load_edge_list(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<Count> degree_sequence(const Graph& g) {
  std::vector<Count> deg(g.n_nodes());
  for (NodeId i = 0; i < g.n_nodes(); ++i) deg[i] = g.degree(i);
  return deg;
}

Graph make_caveman(int n_cliques, int clique_size) {
  if (n_cliques < 2 || clique_size < 2)
    throw std::invalid_argument("caveman needs n_cliques >= 2 and clique_size >= 2");
  const NodeId n = n_cliques * clique_size;
  std::vector<std::array<NodeId, 2>> edges;
  edges.reserve(static_cast<std::size_t>(n_cliques) * clique_size * (clique_size - 1) / 2);
  for (int c = 0; c < n_cliques; ++c) {
    const NodeId start = c * clique_size;
    for (NodeId u = start; u < start + clique_size; ++u) {
      for (NodeId v = u + 1; v < start + clique_size; ++v) {
        if (u == start && v == start + 1) continue;
        edges.push_back({u, v});
      }
    }
    edges.push_back({start, (start - 1 + n) % n});
  }
  return Graph(n, std::move(edges));
}

Graph make_erdos_renyi(NodeId n, double p, std::uint64_t seed) {
  if (n < 1 || p < 0.0 || p > 1.0) throw std::invalid_argument("invalid G(n,p) parameters");
  Rng rng(seed);
  std::vector<std::array<NodeId, 2>> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.uniform() < p) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

bool is_connected(const Graph& g) {
  std::vector<char> seen(g.n_nodes(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  NodeId reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const auto& inc : g.incident(u)) {
      const NodeId v = g.edge(inc.edge)[1 - inc.side];
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == g.n_nodes();
}

}  // namespace dosnet

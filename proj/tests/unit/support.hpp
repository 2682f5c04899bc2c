#pragma once

#include <sstream>
#include <string>

#include "dosnet/graph.hpp"
#include "dosnet/moves.hpp"
#include "dosnet/partition.hpp"
#include "dosnet/random.hpp"

namespace dosnet::testing {

inline Graph graph_from(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

inline std::string data_path(const std::string& name) { return std::string(DOSNET_DATA_DIR) + "/" + name; }

inline StructureMatrix random_structure(int k, Rng& rng) {
  StructureEntries b(k, k);
  for (int a = 0; a < k; ++a)
    for (int x = a; x < k; ++x) b(a, x) = b(x, a) = rng.coin() ? 1 : -1;
  return StructureMatrix(b);
}

inline Graph two_triangles() { return graph_from("0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n"); }

}  // namespace dosnet::testing

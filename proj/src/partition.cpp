#include "dosnet/partition.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dosnet/errors.hpp"

namespace dosnet {

StructureMatrix::StructureMatrix(StructureEntries b) : b_(std::move(b)) {
  if (b_.rows() < 1 || b_.rows() != b_.cols())
    throw std::invalid_argument("structure matrix must be square with K >= 1");
  for (Eigen::Index a = 0; a < b_.rows(); ++a) {
    for (Eigen::Index x = 0; x < b_.cols(); ++x) {
      if (b_(a, x) != 1 && b_(a, x) != -1)
        throw std::invalid_argument("structure matrix entries must be +1 or -1");
      if (b_(a, x) != b_(x, a)) throw std::invalid_argument("structure matrix must be symmetric");
    }
  }
}

StructureMatrix StructureMatrix::assortative(int k) {
  if (k < 1) throw std::invalid_argument("K must be >= 1");
  StructureEntries b = StructureEntries::Constant(k, k, -1);
  b.diagonal().setOnes();
  return StructureMatrix(std::move(b));
}

StructureMatrix StructureMatrix::disassortative(int k) { return -assortative(k); }

bool StructureMatrix::permutation_symmetric() const {
  const int diag = b_(0, 0);
  const int off = k() > 1 ? b_(0, 1) : 0;
  for (int a = 0; a < k(); ++a)
    for (int x = 0; x < k(); ++x)
      if (b_(a, x) != (a == x ? diag : off)) return false;
  return true;
}

StructureMatrix parse_structure(std::istream& in) {
  std::vector<std::vector<int>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<int> row;
    std::string tok;
    while (fields >> tok) {
      if (tok == "." || tok == "-1") {
        row.push_back(-1);
      } else if (tok == "1" || tok == "+1") {
        row.push_back(1);
      } else {
        throw InputError("structure entry '" + tok + "' is not 1, -1 or .", line_no);
      }
    }
    rows.push_back(std::move(row));
  }
  const auto k = static_cast<Eigen::Index>(rows.size());
  if (k == 0) throw InputError("structure matrix is empty");
  StructureEntries b(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    if (static_cast<Eigen::Index>(rows[a].size()) != k)
      throw InputError("structure matrix must be K x K");
    for (Eigen::Index x = 0; x < k; ++x) b(a, x) = rows[a][x];
  }
  try {
    return StructureMatrix(std::move(b));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

StructureMatrix load_structure(const std::string& preset_or_path, int k) {
  if (preset_or_path == "assortative") return StructureMatrix::assortative(k);
  if (preset_or_path == "disassortative") return StructureMatrix::disassortative(k);
  std::ifstream in(preset_or_path);
  if (!in) throw InputError("cannot open structure file '" + preset_or_path + "'");
  StructureMatrix b = parse_structure(in);
  if (b.k() != k)
    throw InputError("structure file has K=" + std::to_string(b.k()) + ", expected " +
                     std::to_string(k));
  return b;
}

void write_structure(std::ostream& out, const StructureMatrix& b) {
  for (int a = 0; a < b.k(); ++a) {
    for (int x = 0; x < b.k(); ++x) out << (x ? " " : "") << b(a, x);
    out << '\n';
  }
}

Labelling::Labelling(std::vector<int> labels, int k) : labels_(std::move(labels)) {
  if (k < 1) throw std::invalid_argument("K must be >= 1");
  group_size_.assign(k, 0);
  for (int l : labels_) {
    if (l < 0 || l >= k) throw std::invalid_argument("label out of range");
    ++group_size_[l];
  }
  for (Count s : group_size_)
    if (s == 0) throw std::invalid_argument("labelling is not surjective");
}

void Labelling::move(NodeId node, int to) {
  const int from = labels_[node];
  if (from == to) return;
  if (group_size_[from] <= 1) throw std::logic_error("move would empty a group");
  --group_size_[from];
  ++group_size_[to];
  labels_[node] = to;
}

Labelling load_labelling_file(const std::string& path, NodeId n_nodes, int k) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open labels file '" + path + "'");
  std::vector<int> labels;
  std::string tok;
  while (in >> tok) {
    if (tok.front() == '#') {
      std::getline(in, tok);
      continue;
    }
    try {
      std::size_t used = 0;
      labels.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("labels file '" + path + "': bad label '" + tok + "'");
    }
  }
  if (static_cast<NodeId>(labels.size()) != n_nodes)
    throw InputError("labels file has " + std::to_string(labels.size()) + " labels, graph has " +
                     std::to_string(n_nodes) + " nodes");
  try {
    return Labelling(std::move(labels), k);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("labels file '") + path + "': " + e.what());
  }
}

}  // namespace dosnet

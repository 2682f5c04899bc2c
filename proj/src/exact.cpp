#include "dosnet/exact.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "dosnet/format.hpp"
#include "dosnet/quality.hpp"

namespace dosnet {

std::int64_t ExactDos::key(double q) { return std::llround(q * 1e12); }

void ExactDos::add(double q) {
  const std::int64_t k = key(q);
  if (++counts[k] == 1) q_of[k] = q;
  ++total;
}

std::uint64_t stirling2(int n, int k) {
  if (n < 0 || k < 0) return 0;
  std::vector<std::vector<std::uint64_t>> s(n + 1, std::vector<std::uint64_t>(k + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= std::min(i, k); ++j) s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
  return s[n][k];
}

ExactDos enumerate_labellings(const Graph& g, int k, const StructureMatrix& b, std::uint64_t budget) {
  if (k < 1 || b.k() != k) throw std::invalid_argument("structure matrix must be K x K");
  const NodeId n = g.n_nodes();
  double space = 1.0;
  for (NodeId i = 0; i < n; ++i) space *= k;
  if (space > static_cast<double>(budget))
    throw std::invalid_argument("enumeration budget exceeded: K^N = " + format_double(space));

  ExactDos out;
  out.permutation_symmetric = b.permutation_symmetric();
  std::vector<int> digits(n, 0);
  std::vector<Count> sizes(k, 0);
  sizes[0] = n;
  const auto& e = b.entries();
  for (;;) {
    bool surjective = true;
    for (Count s : sizes) surjective = surjective && s > 0;
    if (surjective) {
      CountMatrix s = CountMatrix::Zero(k, k);
      CountVector t = CountVector::Zero(k);
      for (const auto& [u, v] : g.edges()) {
        s(digits[u], digits[v]) += 1;
        s(digits[v], digits[u]) += 1;
      }
      for (NodeId i = 0; i < n; ++i) t(digits[i]) += g.degree(i);
      out.add(quality_from_blocks<double>(s, t, g.two_e(), e));
    }
    // odometer increment
    NodeId pos = 0;
    while (pos < n) {
      --sizes[digits[pos]];
      if (++digits[pos] < k) {
        ++sizes[digits[pos]];
        break;
      }
      digits[pos] = 0;
      ++sizes[0];
      ++pos;
    }
    if (pos == n) break;
  }
  std::uint64_t factorial = 1;
  for (int i = 2; i <= k; ++i) factorial *= static_cast<std::uint64_t>(i);
  out.set_partitions = out.total / factorial;
  return out;
}

ExactDos enumerate_structures(const Graph& g, const Labelling& c) {
  const int k = c.k();
  const int n_blocks = k * (k + 1) / 2;
  if (n_blocks > 20) throw std::invalid_argument("enumeration budget exceeded: K(K+1)/2 > 20");
  const auto [s, t] = block_statistics(g, c);
  ExactDos out;
  out.permutation_symmetric = false;
  StructureEntries e(k, k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_blocks); ++mask) {
    int bit = 0;
    for (int a = 0; a < k; ++a) {
      for (int x = a; x < k; ++x, ++bit) {
        e(a, x) = (mask >> bit) & 1 ? 1 : -1;
        e(x, a) = e(a, x);
      }
    }
    out.add(quality_from_blocks<double>(s, t, g.two_e(), e));
  }
  out.set_partitions = out.total;
  return out;
}

DosGrid bin_exact(const ExactDos& exact, const DosGrid& binning) {
  DosGrid grid(binning.q_lo, binning.q_hi, binning.n_bins());
  std::vector<std::uint64_t> per_bin(grid.n_bins(), 0);
  for (const auto& [key, count] : exact.counts) {
    const int bin = grid.bin_of(exact.q_of.at(key));
    if (bin < 0) throw std::invalid_argument("exact Q value falls outside the grid");
    per_bin[bin] += count;
  }
  for (int i = 0; i < grid.n_bins(); ++i) {
    if (per_bin[i] == 0) continue;
    grid.active(i) = true;
    grid.hist(i) = static_cast<std::int64_t>(per_bin[i]);
    grid.log_g(i) = std::log(static_cast<double>(per_bin[i]));
  }
  return normalize(std::move(grid));
}

void write_exact_csv(std::ostream& out, const ExactDos& exact) {
  out << "q,count\n";
  for (const auto& [key, count] : exact.counts) out << format_double(exact.q_of.at(key)) << ',' << count << '\n';
}

}  // namespace dosnet

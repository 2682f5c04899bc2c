#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>

#include "dosnet/dos.hpp"
#include "dosnet/graph.hpp"
#include "dosnet/partition.hpp"

namespace dosnet {

/// Exact g(q) by enumeration. Q values are keyed by round(q * 1e12).
struct ExactDos {
  std::map<std::int64_t, std::uint64_t> counts;
  std::map<std::int64_t, double> q_of;  // first Q seen for each key
  std::uint64_t total = 0;
  /// total / K! for labelling spaces (the Stirling number S(N, K)); equal to
  /// total for structure spaces.
  std::uint64_t set_partitions = 0;
  /// Whether Q is invariant under label permutations, in which case
  /// labelled and unlabelled ensembles have the same normalized DOS.
  bool permutation_symmetric = false;

  static std::int64_t key(double q);
  void add(double q);
  double q_max() const { return q_of.rbegin()->second; }
  double q_min() const { return q_of.begin()->second; }
};

inline constexpr std::uint64_t kEnumerationBudget = 100'000'000;

/// Every surjective labelling with K labels (K^N <= budget).
ExactDos enumerate_labellings(const Graph& g, int k, const StructureMatrix& b,
                              std::uint64_t budget = kEnumerationBudget);

/// Every symmetric +-1 K x K structure for a fixed labelling (K(K+1)/2 <= 20).
ExactDos enumerate_structures(const Graph& g, const Labelling& c);

/// Normalized ln g-hat on `binning`'s bins (active where the count is > 0).
DosGrid bin_exact(const ExactDos& exact, const DosGrid& binning);

/// Stirling number of the second kind by the standard recurrence.
std::uint64_t stirling2(int n, int k);

/// `q,count`.
void write_exact_csv(std::ostream& out, const ExactDos& exact);

}  // namespace dosnet

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dosnet {

using HistVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using ActiveMask = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Binned ln g(q) over [q_lo, q_hi). Only active (visited) bins carry
/// meaningful entropy.
struct DosGrid {
  double q_lo = 0.0;
  double q_hi = 1.0;
  Eigen::VectorXd log_g;
  HistVector hist;
  ActiveMask active;

  DosGrid() = default;
  DosGrid(double lo, double hi, int n_bins);

  int n_bins() const { return static_cast<int>(log_g.size()); }
  double width() const { return (q_hi - q_lo) / n_bins(); }
  double bin_lo(int i) const { return q_lo + i * width(); }
  double bin_hi(int i) const { return i + 1 == n_bins() ? q_hi : q_lo + (i + 1) * width(); }
  int n_active() const { return static_cast<int>(active.count()); }

  /// Bin holding q, or -1 outside the grid. Values within 1e-7 bin widths
  /// below an edge snap up to the next bin so that the incremental and the
  /// recomputed value of an edge-aligned Q agree.
  int bin_of(double q) const;

  bool same_binning(const DosGrid& other) const;
};

/// Shift ln g so that sum over active bins of exp(ln g) is 1. Inactive bins
/// are set to -inf. Throws std::invalid_argument if no bin is active.
DosGrid normalize(DosGrid grid);

/// log(sum(exp(x))) over entries where mask holds.
double log_sum_exp(const Eigen::VectorXd& x, const ActiveMask& mask);

enum class Evidence { Both, OnlyA, OnlyB };

struct RatioRow {
  double q_lo;
  double q_hi;
  double log_ratio;  // +inf / -inf for one-sided bins
  Evidence flag;
};

/// ln g_a - ln g_b on every bin active in either grid (both normalized
/// first). Throws std::invalid_argument for mismatched binning or disjoint
/// active sets.
std::vector<RatioRow> compare(const DosGrid& a, const DosGrid& b);

std::string evidence_name(Evidence e);

/// `q_lo,q_hi,log_g_norm,hist,active`, one row per bin.
void write_dos_csv(std::ostream& out, const DosGrid& grid);
DosGrid read_dos_csv(std::istream& in);
DosGrid read_dos_csv_file(const std::string& path);

/// `q_lo,q_hi,log_ratio,flag`.
void write_ratio_csv(std::ostream& out, const std::vector<RatioRow>& rows);

}  // namespace dosnet

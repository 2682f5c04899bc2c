#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dosnet/dos.hpp"
#include "dosnet/moves.hpp"
#include "dosnet/random.hpp"

namespace dosnet {

struct WlConfig {
  double epsilon = 1e-5;         // stop once f < epsilon
  double n_min = 1e4;            // flatness floor: every active bin >= n_min + 1/sqrt(f)
  int n_bins = 200;
  int n_s = 20;                  // half window width, bins
  int n_o = 10;                  // overshoot bins discarded on each side
  int n_step = 10;               // window shift, bins
  double f0 = 1.0;
  std::uint64_t check_interval = 10'000;
  std::uint64_t max_steps = 20'000'000'000ULL;  // per window; 0 disables the watchdog
  std::uint64_t warmup_steps = 100'000;
  double range_padding = 0.1;    // fraction of the discovered width added on each side
  bool single_window = false;
  unsigned threads = 1;

  void validate() const;
};

/// Bin range [lo, hi] the walk is confined to and the part [keep_lo, keep_hi]
/// that survives into the stitched profile.
struct WindowSpec {
  int lo;
  int hi;
  int keep_lo;
  int keep_hi;
};

struct WindowResult {
  WindowSpec spec;
  Eigen::VectorXd log_g;  // indexed by bin - spec.lo
  HistVector hist;        // last-stage visit counts
  HistVector visits;      // visit counts over the whole run
  ActiveMask active;
  int min_visited = -1;   // grid bin indices
  int max_visited = -1;
  double f_final = 0.0;
  std::uint64_t steps = 0;
  int reductions = 0;
  bool one_over_t = false;
  /// min active-bin count and f at the moment of each histogram reset
  std::vector<std::int64_t> flatness_minima;
  std::vector<double> f_at_reduction;
  std::optional<PartitionState> lowest;
  std::optional<PartitionState> highest;

  bool active_bin(int grid_bin) const {
    return grid_bin >= spec.lo && grid_bin <= spec.hi && active(grid_bin - spec.lo);
  }
  double entropy(int grid_bin) const { return log_g(grid_bin - spec.lo); }
};

/// Raised when a window exceeds its step budget. Carries what had been
/// estimated so far.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, DosGrid partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const DosGrid& partial() const { return partial_; }

 private:
  DosGrid partial_;
};

/// Wang-Landau on one window. The walk starts from `state`, which must lie
/// inside [spec.lo, spec.hi]; moves leaving the window are rejected and the
/// current bin is updated instead. `state` is left at the final walk state.
WindowResult wl_window(PartitionState& state, const DosGrid& binning, const WindowSpec& spec,
                       const WlConfig& cfg, Rng& rng);

/// What a constant-f (f = 1) flat-histogram walk on a fine [-2, 2] grid saw.
struct Exploration {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> values;  // distinct Q values visited, at most kMaxDistinct
  static constexpr std::size_t kMaxDistinct = 10'000;
  bool saturated() const { return values.size() >= kMaxDistinct; }
};

/// Walk `steps` moves from a copy of `state`.
Exploration explore(const PartitionState& state, std::uint64_t steps, Rng& rng);

/// Range of Q values seen by explore().
std::pair<double, double> explore_range(const PartitionState& state, std::uint64_t steps, Rng& rng);

/// Grid from explore_range padded by cfg.range_padding on each side.
DosGrid discover_grid(const PartitionState& state, const WlConfig& cfg, Rng& rng);

/// Join windows (sorted by position) at the overlap bin where their 5-point
/// slopes agree best. Output is un-normalized, in the first window's gauge.
DosGrid stitch(const DosGrid& binning, const std::vector<WindowResult>& windows);

struct SweepResult {
  DosGrid dos;  // normalized
  std::vector<WindowResult> windows;
};

/// Full windowed estimate. Streams: 0 warm-up, 1 the first window, 2k the
/// k-th window to the right, 2k+1 the k-th to the left. With `range` the
/// warm-up is skipped and the grid is fixed to [range.first, range.second].
SweepResult wl_sweep(const PartitionState& start, const WlConfig& cfg, std::uint64_t seed,
                     std::optional<std::pair<double, double>> range = std::nullopt);

}  // namespace dosnet

#include "dosnet/wang_landau.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <unordered_set>

namespace dosnet {

namespace {

constexpr int kExploreBins = 4000;

DosGrid window_partial(const DosGrid& binning, const WindowResult& w) {
  DosGrid grid(binning.q_lo, binning.q_hi, binning.n_bins());
  for (int i = w.spec.lo; i <= w.spec.hi; ++i) {
    grid.active(i) = w.active_bin(i);
    grid.log_g(i) = w.entropy(i);
    grid.hist(i) = w.visits(i - w.spec.lo);
  }
  return grid.n_active() > 0 ? normalize(std::move(grid)) : grid;
}

// Centered 5-point first derivative, in entropy units per bin.
double slope5(const Eigen::VectorXd& s, int x) {
  return (-s(x + 2) + 8.0 * s(x + 1) - 8.0 * s(x - 1) + s(x - 2)) / 12.0;
}

}  // namespace

void WlConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(f0 > 0.0)) throw std::invalid_argument("f0 must be > 0");
  if (n_min < 0.0) throw std::invalid_argument("n_min must be >= 0");
  if (n_bins < 2) throw std::invalid_argument("need at least 2 bins");
  if (n_s < 1 || n_o < 0 || n_step < 1) throw std::invalid_argument("window sizes must be positive");
  if (n_o >= n_s) throw std::invalid_argument("overshoot n_o must be smaller than n_s");
  if (n_step > n_s) throw std::invalid_argument("n_step must not exceed n_s");
  if (check_interval == 0) throw std::invalid_argument("check interval must be positive");
  if (!(range_padding >= 0.0)) throw std::invalid_argument("range padding must be >= 0");
}

WindowResult wl_window(PartitionState& state, const DosGrid& binning, const WindowSpec& spec,
                       const WlConfig& cfg, Rng& rng) {
  cfg.validate();
  const int len = spec.hi - spec.lo + 1;
  if (spec.lo < 0 || spec.hi >= binning.n_bins() || len < 2)
    throw std::invalid_argument("window must hold at least 2 bins inside the grid");

  WindowResult w;
  w.spec = spec;
  w.log_g = Eigen::VectorXd::Zero(len);
  w.hist = HistVector::Zero(len);
  w.visits = HistVector::Zero(len);
  w.active = ActiveMask::Constant(len, false);

  int b = binning.bin_of(state.q()) - spec.lo;
  if (b < 0 || b >= len) throw std::invalid_argument("start state lies outside the window");

  double f = cfg.f0;
  int n_active = 0;
  std::uint64_t steps = 0;

  for (;;) {
    const Move move = state.propose(rng);
    if (!std::holds_alternative<NoOp>(move)) {
      const double dq = state.delta(move);
      const int next = binning.bin_of(state.q() + dq) - spec.lo;
      if (next >= 0 && next < len) {
        const double diff = w.log_g(b) - w.log_g(next);
        if (diff >= 0.0 || rng.uniform() < std::exp(diff)) {
          state.apply(move, dq);
          b = next;
        }
      }
    }

    ++w.hist(b);
    ++w.visits(b);
    w.log_g(b) += f;
    if (!w.active(b)) {
      w.active(b) = true;
      ++n_active;
    }
    ++steps;

    const int grid_bin = b + spec.lo;
    if (grid_bin > w.max_visited) {
      w.max_visited = grid_bin;
      w.highest = state;
    }
    if (w.min_visited < 0 || grid_bin < w.min_visited) {
      w.min_visited = grid_bin;
      w.lowest = state;
    }

    if (w.one_over_t) {
      f = 1.0 / (static_cast<double>(steps) / n_active + 1.0);
      if (f < cfg.epsilon) break;
    } else if (steps % cfg.check_interval == 0) {
      std::int64_t min_count = std::numeric_limits<std::int64_t>::max();
      for (int i = 0; i < len; ++i)
        if (w.active(i)) min_count = std::min(min_count, w.hist(i));
      if (static_cast<double>(min_count) >= cfg.n_min + 1.0 / std::sqrt(f)) {
        w.flatness_minima.push_back(min_count);
        w.f_at_reduction.push_back(f);
        w.hist.setZero();
        f /= 2.0;
        ++w.reductions;
        const double t = static_cast<double>(steps) / n_active;
        if (f < 1.0 / (t + 1.0)) {
          w.one_over_t = true;
          f = 1.0 / (t + 1.0);
        }
        if (f < cfg.epsilon) break;
      }
    }

    if (cfg.max_steps != 0 && steps >= cfg.max_steps) {
      w.steps = steps;
      w.f_final = f;
      throw NonConvergence("Wang-Landau window [" + std::to_string(spec.lo) + ", " +
                               std::to_string(spec.hi) + "] did not converge within " +
                               std::to_string(cfg.max_steps) + " steps (f = " + std::to_string(f) + ")",
                           window_partial(binning, w));
    }
  }
  w.steps = steps;
  w.f_final = f;
  return w;
}

Exploration explore(const PartitionState& state, std::uint64_t steps, Rng& rng) {
  PartitionState walker = state;
  const DosGrid fine(-2.0, 2.0, kExploreBins);
  Eigen::VectorXd log_g = Eigen::VectorXd::Zero(kExploreBins);
  Exploration seen;
  seen.lo = seen.hi = walker.q();
  std::unordered_set<std::int64_t> keys;
  auto note = [&](double q) {
    if (!seen.saturated() && keys.insert(std::llround(q * 1e12)).second) seen.values.push_back(q);
  };
  note(walker.q());
  int b = fine.bin_of(walker.q());
  for (std::uint64_t step = 0; step < steps; ++step) {
    const Move move = walker.propose(rng);
    if (!std::holds_alternative<NoOp>(move)) {
      const double dq = walker.delta(move);
      const int next = fine.bin_of(walker.q() + dq);
      if (next >= 0) {
        const double diff = log_g(b) - log_g(next);
        if (diff >= 0.0 || rng.uniform() < std::exp(diff)) {
          walker.apply(move, dq);
          b = next;
          seen.lo = std::min(seen.lo, walker.q());
          seen.hi = std::max(seen.hi, walker.q());
          note(walker.q());
        }
      }
    }
    log_g(b) += 1.0;
  }
  return seen;
}

std::pair<double, double> explore_range(const PartitionState& state, std::uint64_t steps, Rng& rng) {
  const Exploration seen = explore(state, steps, rng);
  return {seen.lo, seen.hi};
}

namespace {

DosGrid padded_grid(double lo, double hi, const WlConfig& cfg) {
  const double width = hi - lo;
  const double pad = width > 0.0 ? cfg.range_padding * width : 0.05;
  return DosGrid(lo - pad, hi + pad, cfg.n_bins);
}

}  // namespace

DosGrid discover_grid(const PartitionState& state, const WlConfig& cfg, Rng& rng) {
  const auto [lo, hi] = explore_range(state, cfg.warmup_steps, rng);
  return padded_grid(lo, hi, cfg);
}

DosGrid stitch(const DosGrid& binning, const std::vector<WindowResult>& windows) {
  if (windows.empty()) throw std::invalid_argument("nothing to stitch");
  const int n = binning.n_bins();
  DosGrid out(binning.q_lo, binning.q_hi, n);

  // Window profile lifted onto the grid, with the gauge offset applied.
  struct Lifted {
    Eigen::VectorXd s;
    ActiveMask active;
    const WindowResult* source;
  };
  auto lift = [&](const WindowResult& w, double offset) {
    Lifted l{Eigen::VectorXd::Zero(n), ActiveMask::Constant(n, false), &w};
    for (int i = w.spec.keep_lo; i <= w.spec.keep_hi; ++i) {
      if (w.active_bin(i)) {
        l.active(i) = true;
        l.s(i) = w.entropy(i) + offset;
      }
    }
    return l;
  };
  auto take = [&](const Lifted& l, int i) {
    out.active(i) = true;
    out.log_g(i) = l.s(i);
    out.hist(i) = l.source->visits(i - l.source->spec.lo);
  };

  Lifted prev = lift(windows.front(), 0.0);
  for (int i = 0; i < n; ++i)
    if (prev.active(i)) take(prev, i);

  for (std::size_t wi = 1; wi < windows.size(); ++wi) {
    const WindowResult& w = windows[wi];
    const WindowSpec& ps = prev.source->spec;
    const int ov_lo = std::max(ps.keep_lo, w.spec.keep_lo);
    const int ov_hi = std::min(ps.keep_hi, w.spec.keep_hi);
    if (ov_hi - ov_lo + 1 < 5)
      throw std::invalid_argument(
          "adjacent windows overlap by fewer than 5 bins; use a larger n_s or a smaller n_step");

    const Lifted raw = lift(w, 0.0);
    int join = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int x = ov_lo + 2; x <= ov_hi - 2; ++x) {
      bool usable = true;
      for (int d = -2; d <= 2 && usable; ++d) usable = prev.active(x + d) && raw.active(x + d);
      if (!usable) continue;
      const double gap = std::abs(slope5(prev.s, x) - slope5(raw.s, x));
      if (gap < best) {
        best = gap;
        join = x;
      }
    }

    double offset = 0.0;
    if (join >= 0) {
      offset = prev.s(join) - raw.s(join);
    } else {
      // Sparse spectrum: no full stencil available. Match the mean level.
      int shared = 0;
      for (int i = ov_lo; i <= ov_hi; ++i) {
        if (prev.active(i) && raw.active(i)) {
          offset += prev.s(i) - raw.s(i);
          ++shared;
        }
      }
      if (shared == 0) throw std::invalid_argument("adjacent windows share no visited bins");
      offset /= shared;
      join = (ov_lo + ov_hi) / 2;
    }

    const Lifted next = lift(w, offset);
    for (int i = w.spec.keep_lo; i <= w.spec.keep_hi; ++i) {
      if (!next.active(i)) continue;
      if (i > join || !out.active(i)) take(next, i);
    }
    prev = next;
  }
  return out;
}

SweepResult wl_sweep(const PartitionState& start, const WlConfig& cfg, std::uint64_t seed,
                     std::optional<std::pair<double, double>> range) {
  cfg.validate();
  const Rng base(seed);
  Rng warm = base.stream(0);
  const Exploration seen = explore(start, cfg.warmup_steps, warm);
  const DosGrid binning = range ? DosGrid(range->first, range->second, cfg.n_bins)
                                : padded_grid(seen.lo, seen.hi, cfg);
  const int n = binning.n_bins();
  const int b0 = binning.bin_of(start.q());
  if (b0 < 0) throw std::invalid_argument("start state lies outside the DOS grid");

  // Bins the warm-up reached. A spectrum this sparse fits in one window's
  // worth of bins, and split windows could share no visited bins at all.
  std::vector<bool> occupied(n, false);
  for (double q : seen.values)
    if (const int b = binning.bin_of(q); b >= 0) occupied[b] = true;
  const auto n_occupied = std::count(occupied.begin(), occupied.end(), true);
  const int window_bins = 2 * (cfg.n_s + cfg.n_o) + 1;
  const bool sparse = !seen.saturated() && n_occupied <= window_bins;
  const int seen_lo = std::max(0, binning.bin_of(std::max(seen.lo, binning.q_lo)));
  const int seen_hi = binning.bin_of(std::min(seen.hi, binning.q_hi));

  auto spec_at = [&](int center) {
    WindowSpec s;
    s.lo = std::max(0, center - cfg.n_s - cfg.n_o);
    s.hi = std::min(n - 1, center + cfg.n_s + cfg.n_o);
    s.keep_lo = center - cfg.n_s - cfg.n_o <= 0 ? 0 : center - cfg.n_s;
    s.keep_hi = center + cfg.n_s + cfg.n_o >= n - 1 ? n - 1 : center + cfg.n_s;
    return s;
  };

  SweepResult result;
  if (cfg.single_window || window_bins >= n || sparse) {
    PartitionState state = start;
    Rng rng = base.stream(1);
    result.windows.push_back(wl_window(state, binning, {0, n - 1, 0, n - 1}, cfg, rng));
    result.dos = normalize(stitch(binning, result.windows));
    return result;
  }

  {
    PartitionState state = start;
    Rng rng = base.stream(1);
    result.windows.push_back(wl_window(state, binning, spec_at(b0), cfg, rng));
  }

  // direction +1 walks right from the first window's highest state, -1 left
  // from its lowest.
  auto run_chain = [&](int direction) {
    std::vector<WindowResult> chain;
    const WindowResult* prev = &result.windows.front();
    int center = b0;
    for (int k = 1;; ++k) {
      // Go on while the walk pressed against the kept edge or the warm-up saw
      // states beyond it.
      const bool more =
          direction > 0
              ? prev->spec.hi < n - 1 && (prev->max_visited >= prev->spec.keep_hi || seen_hi > prev->spec.keep_hi)
              : prev->spec.lo > 0 && (prev->min_visited <= prev->spec.keep_lo || seen_lo < prev->spec.keep_lo);
      if (!more) break;
      center += direction * cfg.n_step;
      PartitionState state = direction > 0 ? *prev->highest : *prev->lowest;
      Rng rng = base.stream(direction > 0 ? 2 * k : 2 * k + 1);
      chain.push_back(wl_window(state, binning, spec_at(center), cfg, rng));
      prev = &chain.back();
    }
    return chain;
  };

  std::vector<WindowResult> right, left;
  if (cfg.threads >= 2) {
    std::exception_ptr left_error;
    std::thread worker([&] {
      try {
        left = run_chain(-1);
      } catch (...) {
        left_error = std::current_exception();
      }
    });
    std::exception_ptr right_error;
    try {
      right = run_chain(+1);
    } catch (...) {
      right_error = std::current_exception();
    }
    worker.join();
    if (right_error) std::rethrow_exception(right_error);
    if (left_error) std::rethrow_exception(left_error);
  } else {
    right = run_chain(+1);
    left = run_chain(-1);
  }

  std::vector<WindowResult> ordered;
  ordered.reserve(left.size() + 1 + right.size());
  for (auto it = left.rbegin(); it != left.rend(); ++it) ordered.push_back(std::move(*it));
  ordered.push_back(std::move(result.windows.front()));
  for (auto& w : right) ordered.push_back(std::move(w));
  result.windows = std::move(ordered);
  result.dos = normalize(stitch(binning, result.windows));
  return result;
}

}  // namespace dosnet

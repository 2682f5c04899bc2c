#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dosnet/moves.hpp"
#include "dosnet/partition.hpp"
#include "dosnet/random.hpp"

namespace dosnet {

struct EntropicConfig {
  double alpha = 0.99;
  std::size_t m = 1000;
  std::uint64_t n_corr = 10'000;
  std::uint64_t warmup_steps = 1'000'000;
  double f = 1.0;            // constant modification factor
  int n_bins = 200;
  double range_padding = 0.1;
  std::uint64_t max_steps = 0;  // sampling-phase budget; 0 means 10^4 * m * n_corr

  void validate() const;
};

struct SampleRecord {
  double q;
  std::vector<int> labels;
  std::optional<StructureEntries> structure;  // set when B varies
  std::uint64_t step;
};

struct SampleSet {
  std::vector<SampleRecord> records;
  double q_max_seen = 0.0;
  double alpha = 0.99;
  std::uint64_t n_corr = 0;
  std::uint64_t steps = 0;
  bool complete = false;
  std::string diagnostic;
};

/// Acceptance threshold for a running maximum: alpha * q_max when q_max > 0,
/// q_max - (1 - alpha) |q_max| otherwise.
double quality_threshold(double q_max, double alpha);

/// Constant-f Wang-Landau walk that records the state every n_corr steps
/// when its Q exceeds the threshold. A new running maximum discards every
/// earlier record. `state` is advanced in place.
SampleSet entropic_sample(PartitionState& state, const EntropicConfig& cfg, Rng& rng);

/// Union of independent chains, re-filtered against the global maximum.
SampleSet merge_sample_sets(const std::vector<SampleSet>& sets, double alpha);

/// JSON lines: {"q": x, "labels": [...], "B": [[...]]}.
void write_samples_jsonl(std::ostream& out, const SampleSet& samples);
std::vector<SampleRecord> read_samples_jsonl(std::istream& in);
std::vector<SampleRecord> read_samples_jsonl_file(const std::string& path);

}  // namespace dosnet

#include "dosnet/entropic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <stdexcept>

#include "dosnet/dos.hpp"
#include "dosnet/errors.hpp"
#include "dosnet/format.hpp"
#include "dosnet/wang_landau.hpp"

namespace dosnet {

void EntropicConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (m < 1) throw std::invalid_argument("need at least one sample");
  if (n_corr < 1) throw std::invalid_argument("n_corr must be positive");
  if (!(f > 0.0)) throw std::invalid_argument("f must be positive");
  if (n_bins < 2) throw std::invalid_argument("need at least 2 bins");
}

double quality_threshold(double q_max, double alpha) {
  return q_max > 0.0 ? alpha * q_max : q_max - (1.0 - alpha) * std::abs(q_max);
}

SampleSet entropic_sample(PartitionState& state, const EntropicConfig& cfg, Rng& rng) {
  cfg.validate();
  SampleSet out;
  out.alpha = cfg.alpha;
  out.n_corr = cfg.n_corr;

  // Warm-up: the same constant-f walk on a fine grid, tracking extremes.
  const auto [lo, hi] = explore_range(state, cfg.warmup_steps, rng);
  out.q_max_seen = std::max(hi, state.q());
  const double width = out.q_max_seen - lo;
  const double pad = width > 0.0 ? cfg.range_padding * width : 0.05;
  const DosGrid grid(lo - pad, out.q_max_seen + pad, cfg.n_bins);

  int b = grid.bin_of(state.q());
  if (b < 0) throw std::logic_error("entropic sampler: start state outside its grid");
  Eigen::VectorXd log_g = Eigen::VectorXd::Zero(grid.n_bins());
  double q_min = quality_threshold(out.q_max_seen, cfg.alpha);
  const bool record_structure = state.null_space().structure;
  const std::uint64_t budget =
      cfg.max_steps != 0 ? cfg.max_steps : 10'000ULL * cfg.m * cfg.n_corr;

  std::uint64_t step = 0;
  while (out.records.size() < cfg.m) {
    if (step >= budget) {
      out.steps = step;
      out.diagnostic = "step budget of " + std::to_string(budget) + " exhausted with " +
                       std::to_string(out.records.size()) + " of " + std::to_string(cfg.m) +
                       " samples";
      return out;
    }
    const Move move = state.propose(rng);
    if (!std::holds_alternative<NoOp>(move)) {
      const double dq = state.delta(move);
      const int next = grid.bin_of(state.q() + dq);
      if (next >= 0) {
        const double diff = log_g(b) - log_g(next);
        if (diff >= 0.0 || rng.uniform() < std::exp(diff)) {
          state.apply(move, dq);
          b = next;
          if (state.q() > out.q_max_seen) {
            out.q_max_seen = state.q();
            q_min = quality_threshold(out.q_max_seen, cfg.alpha);
            out.records.clear();
          }
        }
      }
    }
    log_g(b) += cfg.f;
    ++step;

    if (step % cfg.n_corr == 0 && state.q() > q_min) {
      SampleRecord rec;
      rec.q = state.recomputed_q();
      rec.labels = state.labels().labels();
      if (record_structure) rec.structure = state.structure().entries();
      rec.step = step;
      out.records.push_back(std::move(rec));
    }
  }
  out.steps = step;
  out.complete = true;
  return out;
}

SampleSet merge_sample_sets(const std::vector<SampleSet>& sets, double alpha) {
  if (sets.empty()) throw std::invalid_argument("no sample sets to merge");
  SampleSet out;
  out.alpha = alpha;
  out.complete = true;
  out.q_max_seen = sets.front().q_max_seen;
  for (const auto& s : sets) {
    out.q_max_seen = std::max(out.q_max_seen, s.q_max_seen);
    out.n_corr = std::max(out.n_corr, s.n_corr);
    out.steps += s.steps;
    out.complete = out.complete && s.complete;
  }
  const double q_min = quality_threshold(out.q_max_seen, alpha);
  for (const auto& s : sets)
    for (const auto& r : s.records)
      if (r.q >= q_min) out.records.push_back(r);
  return out;
}

void write_samples_jsonl(std::ostream& out, const SampleSet& samples) {
  for (const auto& r : samples.records) {
    out << "{\"q\": " << format_double(r.q) << ", \"labels\": [";
    for (std::size_t i = 0; i < r.labels.size(); ++i) out << (i ? "," : "") << r.labels[i];
    out << ']';
    if (r.structure) {
      out << ", \"B\": [";
      for (Eigen::Index a = 0; a < r.structure->rows(); ++a) {
        out << (a ? "," : "") << '[';
        for (Eigen::Index x = 0; x < r.structure->cols(); ++x)
          out << (x ? "," : "") << (*r.structure)(a, x);
        out << ']';
      }
      out << ']';
    }
    out << "}\n";
  }
}

std::vector<SampleRecord> read_samples_jsonl(std::istream& in) {
  std::vector<SampleRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      SampleRecord r;
      r.q = j.at("q").get<double>();
      r.labels = j.at("labels").get<std::vector<int>>();
      r.step = 0;
      if (j.contains("B")) {
        const auto rows = j.at("B").get<std::vector<std::vector<int>>>();
        StructureEntries b(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
        for (std::size_t a = 0; a < rows.size(); ++a) {
          if (rows[a].size() != rows.size()) throw InputError("B must be square", line_no);
          for (std::size_t x = 0; x < rows.size(); ++x) b(a, x) = rows[a][x];
        }
        r.structure = std::move(b);
      }
      if (!records.empty() && r.labels.size() != records.front().labels.size())
        throw InputError("sample has a different node count", line_no);
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("bad sample record: ") + e.what(), line_no);
    }
  }
  return records;
}

std::vector<SampleRecord> read_samples_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open samples file '" + path + "'");
  try {
    return read_samples_jsonl(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace dosnet

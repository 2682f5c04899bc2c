#include "dosnet/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "dosnet/blocks.hpp"
#include "dosnet/dos.hpp"
#include "dosnet/entropic.hpp"
#include "dosnet/errors.hpp"
#include "dosnet/exact.hpp"
#include "dosnet/format.hpp"
#include "dosnet/graph.hpp"
#include "dosnet/moves.hpp"
#include "dosnet/partition.hpp"
#include "dosnet/quality.hpp"
#include "dosnet/wang_landau.hpp"

namespace dosnet::cli {

namespace {

using json = nlohmann::json;

// Stream reserved for drawing the initial random labelling.
constexpr std::uint64_t kInitStream = 1023;

struct Options {
  std::string graph;
  int k = 2;
  std::string null = "labels";
  std::string structure;
  std::string labels;
  std::string samples;
  std::string out;
  std::string w_out;
  std::string param_out;
  int bins = 200;
  int n_s = 20;
  int n_o = 10;
  int n_step = 10;
  double epsilon = 1e-5;
  double n_min = 1e4;
  std::optional<double> p_swap;
  std::optional<double> p_rewire;
  std::optional<double> q_lo;
  std::optional<double> q_hi;
  std::uint64_t warmup = 0;
  std::uint64_t max_steps = 0;
  bool single_window = false;
  double alpha = 0.99;
  std::size_t m = 1000;
  std::uint64_t n_corr = 10'000;
  std::optional<double> theta;
  bool sweep = false;
  bool structures = false;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string dos_a;
  std::string dos_b;
  std::string manifest;
  int cliques = 20;
  int clique_size = 5;
  int er_n = 30;
  double er_p = 0.2;
  std::string gen_kind;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Output sink: --out file or the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw InputError("cannot write output file '" + path + "'");
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& stream() { return *stream_; }
  void close() {
    if (file_.is_open()) file_.close();
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_;
};

Graph load_graph(const Options& o) {
  if (o.graph.empty()) throw UsageError("--graph is required");
  return load_edge_list_file(o.graph);
}

NullSpace parse_null(const Options& o) {
  try {
    return NullSpace::parse(o.null);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

MoveMix resolve_mix(const Options& o, const NullSpace& null) {
  MoveMix mix = MoveMix::defaults_for(null);
  if (o.p_swap) {
    mix.p_swap = *o.p_swap;
    if (null.rewire && null.structure) {
      mix.p_rewire = (1.0 - mix.p_swap) / 2.0;
    } else if (null.rewire) {
      mix.p_rewire = 1.0 - mix.p_swap;
    } else {
      mix.p_rewire = 0.0;
    }
  }
  if (o.p_rewire) mix.p_rewire = *o.p_rewire;
  if (!null.rewire && !null.structure) mix = {1.0, 0.0};
  try {
    mix.validate(null);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return mix;
}

StructureMatrix resolve_structure(const Options& o, const NullSpace& null) {
  if (o.structure.empty()) {
    if (!null.structure) throw UsageError("--b is required unless the null space varies B");
    return StructureMatrix::assortative(o.k);
  }
  return load_structure(o.structure, o.k);
}

PartitionState build_state(const Options& o, const Graph& g, const NullSpace& null) {
  if (o.k < 2) throw UsageError("--k must be >= 2");
  if (o.k > g.n_nodes()) throw InputError("K exceeds the number of nodes");
  StructureMatrix b = resolve_structure(o, null);
  const MoveMix mix = resolve_mix(o, null);
  Labelling c;
  if (!o.labels.empty()) {
    c = load_labelling_file(o.labels, g.n_nodes(), o.k);
  } else {
    Rng init = Rng(o.seed).stream(kInitStream);
    c = Labelling::random(g.n_nodes(), o.k, init);
  }
  return PartitionState(g, std::move(c), std::move(b), null, mix);
}

json input_digests(const std::vector<std::string>& paths) {
  json j = json::object();
  for (const auto& p : paths) {
    if (p.empty() || p == "assortative" || p == "disassortative") continue;
    j[p] = file_sha256(p);
  }
  return j;
}

void write_manifest(const Options& o, const std::string& command, const std::vector<std::string>& args,
                    const json& parameters, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double seconds) {
  if (o.out.empty()) return;
  json m;
  m["command"] = command;
  m["args"] = args;
  m["parameters"] = parameters;
  m["seed"] = o.seed;
  m["inputs"] = input_digests(inputs);
  json outs = json::object();
  for (const auto& p : outputs) outs[p] = file_sha256(p);
  m["outputs"] = outs;
  m["tool_version"] = kToolVersion;
  m["wall_clock_seconds"] = seconds;
  std::ofstream f(o.out + ".manifest.json", std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("cannot write manifest for '" + o.out + "'");
  f << m.dump(2) << '\n';
}

WlConfig wl_config(const Options& o) {
  WlConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.n_min = o.n_min;
  cfg.n_bins = o.bins;
  cfg.n_s = o.n_s;
  cfg.n_o = o.n_o;
  cfg.n_step = o.n_step;
  cfg.single_window = o.single_window;
  cfg.threads = o.threads;
  if (o.warmup) cfg.warmup_steps = o.warmup;
  if (o.max_steps) cfg.max_steps = o.max_steps;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

int cmd_dos(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const NullSpace null = parse_null(o);
  const WlConfig cfg = wl_config(o);
  if (o.q_lo.has_value() != o.q_hi.has_value()) throw UsageError("--qlo and --qhi go together");
  std::optional<std::pair<double, double>> range;
  if (o.q_lo) {
    if (!(*o.q_hi > *o.q_lo)) throw UsageError("--qhi must exceed --qlo");
    range = std::make_pair(*o.q_lo, *o.q_hi);
  }
  const Graph g = load_graph(o);
  const PartitionState start = build_state(o, g, null);

  int status = kExitOk;
  DosGrid dos;
  std::size_t windows = 0;
  try {
    const SweepResult result = wl_sweep(start, cfg, o.seed, range);
    dos = result.dos;
    windows = result.windows.size();
  } catch (const NonConvergence& e) {
    err << "dosnet: " << e.what() << "; writing the partial profile\n";
    dos = e.partial();
    status = kExitNonConvergence;
  }
  Sink sink(o.out, out);
  write_dos_csv(sink.stream(), dos);
  sink.close();

  json params = {{"k", o.k},
                 {"null", null.name()},
                 {"b", o.structure.empty() ? "assortative" : o.structure},
                 {"bins", cfg.n_bins},
                 {"ns", cfg.n_s},
                 {"no", cfg.n_o},
                 {"nstep", cfg.n_step},
                 {"epsilon", cfg.epsilon},
                 {"nmin", cfg.n_min},
                 {"warmup", cfg.warmup_steps},
                 {"q_lo", dos.q_lo},
                 {"q_hi", dos.q_hi},
                 {"single_window", cfg.single_window},
                 {"windows", windows},
                 {"pswap", start.mix().p_swap},
                 {"prewire", start.mix().p_rewire},
                 {"threads", cfg.threads}};
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_manifest(o, "dos", args, params, {o.graph, o.structure, o.labels}, {o.out}, seconds);
  return status;
}

int cmd_compare(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const DosGrid a = read_dos_csv_file(o.dos_a);
  const DosGrid b = read_dos_csv_file(o.dos_b);
  std::vector<RatioRow> rows;
  try {
    rows = compare(a, b);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  Sink sink(o.out, out);
  write_ratio_csv(sink.stream(), rows);
  sink.close();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_manifest(o, "compare", args, json::object(), {o.dos_a, o.dos_b}, {o.out}, seconds);
  return kExitOk;
}

int cmd_sample(const Options& o, const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const NullSpace null = parse_null(o);
  EntropicConfig cfg;
  cfg.alpha = o.alpha;
  cfg.m = o.m;
  cfg.n_corr = o.n_corr;
  cfg.n_bins = o.bins;
  if (o.warmup) cfg.warmup_steps = o.warmup;
  cfg.max_steps = o.max_steps;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Graph g = load_graph(o);
  PartitionState state = build_state(o, g, null);
  Rng rng(o.seed);
  const SampleSet samples = entropic_sample(state, cfg, rng);

  Sink sink(o.out, out);
  write_samples_jsonl(sink.stream(), samples);
  sink.close();
  json params = {{"k", o.k},         {"null", null.name()}, {"b", o.structure},
                 {"alpha", cfg.alpha}, {"m", cfg.m},          {"ncorr", cfg.n_corr},
                 {"warmup", cfg.warmup_steps}, {"bins", cfg.n_bins},
                 {"pswap", state.mix().p_swap}, {"prewire", state.mix().p_rewire},
                 {"q_max_seen", samples.q_max_seen}, {"steps", samples.steps}};
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_manifest(o, "sample", args, params, {o.graph, o.structure, o.labels}, {o.out}, seconds);
  if (!samples.complete) {
    err << "dosnet: " << samples.diagnostic << '\n';
    return kExitNonConvergence;
  }
  return kExitOk;
}

int cmd_blocks(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  if (!o.theta && !o.sweep) throw UsageError("blocks needs --theta, --sweep, or both");
  if (o.theta && !(*o.theta >= 0.0 && *o.theta < 1.0)) throw UsageError("--theta must lie in [0, 1)");
  const auto records = read_samples_jsonl_file(o.samples);
  if (records.empty()) throw InputError("samples file '" + o.samples + "' holds no samples");
  std::vector<std::vector<int>> partitions;
  partitions.reserve(records.size());
  for (const auto& r : records) partitions.push_back(r.labels);

  std::vector<std::string> tokens;
  if (!o.graph.empty()) {
    tokens = load_graph(o).tokens();
    if (tokens.size() != partitions.front().size())
      throw InputError("samples and graph have different node counts");
  }
  const Eigen::MatrixXd w = co_occurrence(partitions);

  std::vector<std::string> outputs;
  if (o.sweep) {
    Sink sink(o.out, out);
    write_sweep_csv(sink.stream(), threshold_sweep(w, partitions, default_theta_grid()));
    sink.close();
    outputs.push_back(o.out);
  }
  if (o.theta) {
    const std::string path = o.sweep && !o.out.empty() ? o.out + ".blocks.json" : o.out;
    const BlockSet blocks = blocks_at_threshold(w, *o.theta);
    Sink sink(path, out);
    write_blocks_json(sink.stream(), blocks, mean_completeness(blocks, partitions), tokens);
    sink.close();
    if (path != o.out) outputs.push_back(path);
    else if (!o.sweep) outputs.push_back(o.out);
  }
  if (!o.w_out.empty()) {
    Sink sink(o.w_out, out);
    write_matrix_csv(sink.stream(), w);
    sink.close();
    outputs.push_back(o.w_out);
  }
  json params = {{"theta", o.theta ? json(*o.theta) : json(nullptr)}, {"sweep", o.sweep},
                 {"samples", records.size()}};
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!o.out.empty()) write_manifest(o, "blocks", args, params, {o.samples, o.graph}, outputs, seconds);
  return kExitOk;
}

int cmd_exact(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  if (o.k < 1) throw UsageError("--k must be >= 1");
  const Graph g = load_graph(o);
  ExactDos exact;
  try {
    if (o.structures) {
      if (o.labels.empty()) throw UsageError("--structures needs --labels");
      exact = enumerate_structures(g, load_labelling_file(o.labels, g.n_nodes(), o.k));
    } else {
      const StructureMatrix b = load_structure(o.structure.empty() ? "assortative" : o.structure, o.k);
      exact = enumerate_labellings(g, o.k, b);
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  Sink sink(o.out, out);
  write_exact_csv(sink.stream(), exact);
  sink.close();
  err << "enumerated " << exact.total << " states (" << exact.set_partitions << " set partitions)\n";
  json params = {{"k", o.k},
                 {"b", o.structure.empty() ? "assortative" : o.structure},
                 {"structures", o.structures},
                 {"total", exact.total},
                 {"set_partitions", exact.set_partitions}};
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_manifest(o, "exact", args, params, {o.graph, o.structure, o.labels}, {o.out}, seconds);
  return kExitOk;
}

int cmd_score(const Options& o, std::ostream& out) {
  if (o.labels.empty()) throw UsageError("score needs --labels");
  if (o.structure.empty()) throw UsageError("score needs --b");
  const Graph g = load_graph(o);
  const Labelling c = load_labelling_file(o.labels, g.n_nodes(), o.k);
  const StructureMatrix b = load_structure(o.structure, o.k);
  out << format_double(recompute(g, c, b).q) << '\n';
  return kExitOk;
}

int cmd_gen(const Options& o, std::ostream& out) {
  Graph g;
  try {
    if (o.gen_kind == "caveman") {
      g = make_caveman(o.cliques, o.clique_size);
    } else if (o.gen_kind == "er") {
      g = make_erdos_renyi(o.er_n, o.er_p, o.seed);
    } else {
      throw UsageError("gen kind must be 'caveman' or 'er'");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Sink sink(o.out, out);
  g.write_edge_list(sink.stream());
  return kExitOk;
}

int cmd_replay(const Options& o, std::ostream& out, std::ostream& err) {
  std::ifstream in(o.manifest);
  if (!in) throw InputError("cannot open manifest '" + o.manifest + "'");
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad manifest: ") + e.what());
  }
  const auto args = m.at("args").get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "replay") throw InputError("manifest replays itself");
  return run(args, out, err);
}

}  // namespace

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 unavailable");
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
    if (!in) break;
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Density of states of network partitions (Wang-Landau), entropic sampling, building blocks",
               "dosnet"};
  app.require_subcommand(1);

  auto add_graph = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--graph", o.graph, "Edge list file");
    if (required) opt->required();
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--k", o.k, "Number of groups");
    sub->add_option("--null", o.null, "labels | labels+cm | labels+B | labels+cm+B");
    sub->add_option("--b", o.structure, "Structure matrix file or preset (assortative, disassortative)");
    sub->add_option("--labels", o.labels, "Initial labelling file");
    sub->add_option("--pswap", o.p_swap, "Label-swap probability");
    sub->add_option("--prewire", o.p_rewire, "Rewiring probability");
    sub->add_option("--bins", o.bins, "Number of Q bins");
    sub->add_option("--warmup", o.warmup, "Warm-up steps");
    sub->add_option("--max-steps", o.max_steps, "Step budget (0 = default)");
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--out", o.out, "Output file (default stdout)");
  };

  auto* dos = app.add_subcommand("dos", "Estimate ln g(Q) with windowed Wang-Landau");
  add_graph(dos, true);
  add_model(dos);
  dos->add_option("--ns", o.n_s, "Half window width in bins");
  dos->add_option("--no", o.n_o, "Overshoot bins");
  dos->add_option("--nstep", o.n_step, "Window shift in bins");
  dos->add_option("--epsilon", o.epsilon, "Final modification factor");
  dos->add_option("--nmin", o.n_min, "Flatness floor");
  dos->add_option("--qlo", o.q_lo, "Fix the grid's lower edge");
  dos->add_option("--qhi", o.q_hi, "Fix the grid's upper edge");
  dos->add_flag("--single-window", o.single_window, "One window over the whole grid");
  dos->add_option("--threads", o.threads, "Worker threads (results do not depend on it)");

  auto* cmp = app.add_subcommand("compare", "Per-bin log ratio of two DOS files");
  cmp->add_option("dos_a", o.dos_a, "First DOS CSV")->required();
  cmp->add_option("dos_b", o.dos_b, "Second DOS CSV")->required();
  cmp->add_option("--out", o.out, "Output file (default stdout)");

  auto* sample = app.add_subcommand("sample", "Harvest high-Q states by entropic sampling");
  add_graph(sample, true);
  add_model(sample);
  sample->add_option("--alpha", o.alpha, "Keep states with Q >= alpha * Qmax");
  sample->add_option("--m", o.m, "Number of samples");
  sample->add_option("--ncorr", o.n_corr, "Steps between checks");
  sample->add_option("--threads", o.threads, "Accepted for symmetry with dos; sampling uses one chain");

  auto* blocks = app.add_subcommand("blocks", "Building blocks from a sample file");
  blocks->add_option("--samples", o.samples, "JSON-lines samples")->required();
  add_graph(blocks, false);
  blocks->add_option("--theta", o.theta, "Threshold for the reported block set");
  blocks->add_flag("--sweep", o.sweep, "Emit the threshold sweep CSV");
  blocks->add_option("--wout", o.w_out, "Write the co-occurrence matrix as dense CSV");
  blocks->add_option("--out", o.out, "Output file (default stdout)");

  auto* exact = app.add_subcommand("exact", "Exact DOS by enumeration (small graphs)");
  add_graph(exact, true);
  exact->add_option("--k", o.k, "Number of groups");
  exact->add_option("--b", o.structure, "Structure matrix file or preset");
  exact->add_option("--labels", o.labels, "Fixed labelling (with --structures)");
  exact->add_flag("--structures", o.structures, "Enumerate structure matrices instead of labellings");
  exact->add_option("--out", o.out, "Output file (default stdout)");

  auto* score = app.add_subcommand("score", "Q for one labelling");
  add_graph(score, true);
  score->add_option("--k", o.k, "Number of groups");
  score->add_option("--labels", o.labels, "Labelling file")->required();
  score->add_option("--b", o.structure, "Structure matrix file or preset")->required();

  auto* gen = app.add_subcommand("gen", "Write a generated graph as an edge list");
  gen->add_option("kind", o.gen_kind, "caveman | er")->required();
  gen->add_option("--cliques", o.cliques, "Caveman clique count");
  gen->add_option("--size", o.clique_size, "Caveman clique size");
  gen->add_option("--n", o.er_n, "G(n,p) node count");
  gen->add_option("--p", o.er_p, "G(n,p) edge probability");
  gen->add_option("--seed", o.seed, "RNG seed");
  gen->add_option("--out", o.out, "Output file (default stdout)");

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", o.manifest, "Manifest JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "dosnet: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*dos) return cmd_dos(o, args, out, err);
    if (*cmp) return cmd_compare(o, args, out);
    if (*sample) return cmd_sample(o, args, out, err);
    if (*blocks) return cmd_blocks(o, args, out);
    if (*exact) return cmd_exact(o, args, out, err);
    if (*score) return cmd_score(o, out);
    if (*gen) return cmd_gen(o, out);
    if (*replay) return cmd_replay(o, out, err);
  } catch (const InputError& e) {
    err << "dosnet: " << e.what() << '\n';
    return kExitInput;
  } catch (const NonConvergence& e) {
    err << "dosnet: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << "dosnet: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dosnet::cli

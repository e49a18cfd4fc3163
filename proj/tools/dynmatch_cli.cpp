// dynmatch: generate turnstile streams and hard instances, run the streaming
// matcher and the simultaneous-message simulator, and sweep parameters.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "dynmatch/errors.hpp"
#include "dynmatch/experiment.hpp"
#include "dynmatch/graph.hpp"
#include "dynmatch/hard_instance.hpp"
#include "dynmatch/sim_protocol.hpp"
#include "dynmatch/streaming_matcher.hpp"
#include "dynmatch/turnstile_stream.hpp"

namespace {

using namespace dynmatch;

std::optional<std::size_t> parse_budget(const std::string& text) {
  if (text == "unlimited") return std::nullopt;
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw InvalidParameter("budget must be a byte count or 'unlimited'");
  return static_cast<std::size_t>(v);
}

// Writes to `path`, or to stdout when path is empty or "-".
class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Error("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct GenStreamOptions {
  std::string graph;
  std::size_t left = 100;
  std::size_t right = 100;
  double density = 0.1;
  double churn = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string graph_out;
};

void gen_stream(const GenStreamOptions& o) {
  BipartiteGraph g = o.graph.empty() ? random_bipartite_graph(o.left, o.right, o.density, o.seed)
                                     : read_graph_file(o.graph);
  UpdateStream s = stream_from_graph(g, o.churn, o.seed);
  OutputSink sink(o.out);
  write_stream(sink.stream(), s);
  if (!o.graph_out.empty()) write_graph_file(o.graph_out, g);
}

struct GenHardOptions {
  HardParams params;
  std::uint64_t seed = 0;
  double churn = 0.0;
  std::string out;
  std::string union_stream;
};

void gen_hard(const GenHardOptions& o) {
  for (const std::string& w : o.params.warnings()) std::cerr << "warning: " << w << '\n';
  HardInstance inst = build_global(o.params, o.seed);
  OutputSink sink(o.out);
  write_instance(sink.stream(), inst);
  if (!o.union_stream.empty()) {
    write_stream_file(o.union_stream, instance_to_streams(inst, o.churn, o.seed).union_stream);
  }
}

struct MatchStreamOptions {
  std::string input;
  std::size_t k = 1;
  double c = 1.0;
  std::optional<double> delta;
  std::uint64_t seed = 0;
  std::string report;
  std::string matching_out;
};

void match_stream_cmd(const MatchStreamOptions& o) {
  UpdateStream s = read_stream_file(o.input);
  MatcherConfig cfg;
  cfg.left_size = s.left_size;
  cfg.right_size = s.right_size;
  cfg.k = o.k;
  cfg.c = o.c;
  cfg.delta = o.delta;
  cfg.seed = o.seed;
  MatcherResult result;
  MatchStreamRow row = match_stream(s, cfg, &result);
  OutputSink sink(o.report);
  write_match_stream_csv(sink.stream(), row);
  if (!o.matching_out.empty()) {
    std::ofstream out(o.matching_out);
    if (!out) throw Error("cannot write '" + o.matching_out + "'");
    write_matching(out, result.matching);
  }
}

struct RunSimOptions {
  std::string instance;
  std::size_t k = 1;
  std::string budget = "unlimited";
  std::string strategy = "alg1";
  std::uint64_t seed = 0;
  bool parallel = false;
  std::string report;
};

void run_sim(const RunSimOptions& o) {
  HardInstance inst = read_instance_file(o.instance);
  ProtocolConfig cfg;
  cfg.k = o.k;
  cfg.budget_bytes = parse_budget(o.budget);
  cfg.strategy = parse_strategy(o.strategy);
  cfg.seed = o.seed;
  cfg.parallel = o.parallel;
  ProtocolRun run = run_protocol(inst, cfg);
  OutputSink sink(o.report);
  write_run_sim_csv(sink.stream(), inst, run);
}

struct SweepOptions {
  std::string kind = "match-random";
  std::vector<std::string> budgets{"unlimited"};
  std::string strategy = "alg1";
  std::string out;
  ExperimentSpec spec;
};

void sweep(SweepOptions o) {
  o.spec.kind = parse_experiment_kind(o.kind);
  o.spec.strategy = parse_strategy(o.strategy);
  o.spec.budgets.clear();
  for (const std::string& b : o.budgets) o.spec.budgets.push_back(parse_budget(b));
  OutputSink sink(o.out);
  run_experiment(o.spec, sink.stream());
}

struct CountOptions {
  HardParams params;
};

void count_cmd(const CountOptions& o) {
  std::cout << "count " << count_party_graphs(o.params) << '\n';
  const BigRational lb = lower_bound_count(o.params);
  std::cout << "lower_bound " << boost::multiprecision::numerator(lb) << '/'
            << boost::multiprecision::denominator(lb) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Turnstile-stream bipartite matching via l0-sampling, hard instances and a "
               "simultaneous-message simulator"};
  app.require_subcommand(1);

  GenStreamOptions gs;
  auto* gen_stream_cmd = app.add_subcommand("gen-stream", "Write a dynamic update stream for a graph");
  gen_stream_cmd->add_option("--graph", gs.graph, "Input graph file ('p bip' format); random graph if omitted")
      ->check(CLI::ExistingFile);
  gen_stream_cmd->add_option("--left", gs.left, "Left side size of the random graph")->capture_default_str();
  gen_stream_cmd->add_option("--right", gs.right, "Right side size of the random graph")->capture_default_str();
  gen_stream_cmd->add_option("--density", gs.density, "Edge probability of the random graph")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_stream_cmd->add_option("--churn", gs.churn, "Decoy insert/delete pairs per edge")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_stream_cmd->add_option("--seed", gs.seed, "Random seed")->capture_default_str();
  gen_stream_cmd->add_option("--out", gs.out, "Stream file (stdout if omitted)");
  gen_stream_cmd->add_option("--graph-out", gs.graph_out, "Also write the end-of-stream graph here");

  GenHardOptions gh;
  auto* gen_hard_cmd = app.add_subcommand("gen-hard", "Sample a multi-party hard instance");
  gen_hard_cmd->add_option("--P", gh.params.parties, "Number of parties")->required();
  gen_hard_cmd->add_option("--Q", gh.params.q, "Number of shared vertex groups")->required();
  gen_hard_cmd->add_option("--k", gh.params.group_size, "Group size (even, >= P)")->required();
  gen_hard_cmd->add_option("--seed", gh.seed, "Random seed")->capture_default_str();
  gen_hard_cmd->add_option("--out", gh.out, "Instance file (stdout if omitted)");
  gen_hard_cmd->add_option("--union-stream", gh.union_stream, "Also write the union graph as a stream");
  gen_hard_cmd->add_option("--churn", gh.churn, "Decoy churn of --union-stream")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  MatchStreamOptions ms;
  auto* match_cmd = app.add_subcommand("match-stream", "Run the one-pass streaming matcher on a stream file");
  match_cmd->add_option("--input", ms.input, "Stream file ('p ts' format)")->required()->check(CLI::ExistingFile);
  match_cmd->add_option("--k", ms.k, "Vertex sample size and per-vertex edge budget")->required();
  match_cmd->add_option("--c", ms.c, "Sampler multiplier: ceil(c*k*log2 n) samplers per vertex")
      ->capture_default_str();
  match_cmd->add_option("--delta", ms.delta, "Per-sampler failure probability (default 1/n^2)");
  match_cmd->add_option("--seed", ms.seed, "Random seed")->capture_default_str();
  match_cmd->add_option("--report", ms.report, "CSV report (stdout if omitted)");
  match_cmd->add_option("--matching-out", ms.matching_out, "Write the output matching ('m a b' lines)");

  RunSimOptions rs;
  auto* sim_cmd = app.add_subcommand("run-sim", "Run the simultaneous-message protocol on a hard instance");
  sim_cmd->add_option("--instance", rs.instance, "Instance file ('p hard' format)")
      ->required()
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--k", rs.k, "Vertex sample size and per-vertex edge budget")->required();
  sim_cmd->add_option("--budget", rs.budget, "Per-message byte budget or 'unlimited'")->capture_default_str();
  sim_cmd->add_option("--strategy", rs.strategy, "alg1 or trivial")
      ->check(CLI::IsMember({"alg1", "trivial"}))
      ->capture_default_str();
  sim_cmd->add_option("--seed", rs.seed, "Shared random seed")->capture_default_str();
  sim_cmd->add_flag("--parallel", rs.parallel, "Compute party messages concurrently");
  sim_cmd->add_option("--report", rs.report, "CSV report (stdout if omitted)");

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep parameter grids and write one CSV row per trial");
  sweep_cmd->add_option("--kind", sw.kind, "match-random, match-hard or sim-budget")
      ->check(CLI::IsMember({"match-random", "match-hard", "sim-budget"}))
      ->capture_default_str();
  sweep_cmd->add_option("--side", sw.spec.sides, "Vertices per side (match-random)")->delimiter(',');
  sweep_cmd->add_option("--density", sw.spec.densities, "Edge probabilities (match-random)")->delimiter(',');
  sweep_cmd->add_option("--k", sw.spec.ks, "Sample sizes k")->delimiter(',');
  sweep_cmd->add_option("--c", sw.spec.cs, "Sampler multipliers")->delimiter(',');
  sweep_cmd->add_option("--delta", sw.spec.deltas, "Sampler failure probabilities (default 1/n^2)")
      ->delimiter(',');
  sweep_cmd->add_option("--churn", sw.spec.churns, "Stream churn values")->delimiter(',');
  sweep_cmd->add_option("--P", sw.spec.parties, "Party counts (hard kinds)")->delimiter(',');
  sweep_cmd->add_option("--Q", sw.spec.qs, "Shared group counts (hard kinds)")->delimiter(',');
  sweep_cmd->add_option("--group-k", sw.spec.group_sizes, "Group sizes (hard kinds)")->delimiter(',');
  sweep_cmd->add_option("--budget", sw.budgets, "Byte budgets or 'unlimited' (sim-budget)")->delimiter(',');
  sweep_cmd->add_option("--strategy", sw.strategy, "alg1 or trivial (sim-budget)")
      ->check(CLI::IsMember({"alg1", "trivial"}))
      ->capture_default_str();
  sweep_cmd->add_option("--trials", sw.spec.trials, "Trials per grid cell")->capture_default_str();
  sweep_cmd->add_option("--seed", sw.spec.seed, "Master seed")->capture_default_str();
  sweep_cmd->add_option("--out", sw.out, "CSV output (stdout if omitted)");

  CountOptions co;
  auto* count = app.add_subcommand("count-graphs", "Exact and lower-bound party graph counts");
  count->add_option("--P", co.params.parties, "Number of parties")->required();
  count->add_option("--Q", co.params.q, "Number of shared vertex groups")->required();
  count->add_option("--k", co.params.group_size, "Group size")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_stream_cmd) gen_stream(gs);
    if (*gen_hard_cmd) gen_hard(gh);
    if (*match_cmd) match_stream_cmd(ms);
    if (*sim_cmd) run_sim(rs);
    if (*sweep_cmd) sweep(sw);
    if (*count) count_cmd(co);
  } catch (const std::exception& e) {
    std::cerr << "dynmatch: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

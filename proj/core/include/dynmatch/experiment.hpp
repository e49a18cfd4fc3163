#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynmatch/hard_instance.hpp"
#include "dynmatch/sim_protocol.hpp"
#include "dynmatch/streaming_matcher.hpp"
#include "dynmatch/turnstile_stream.hpp"

namespace dynmatch {

/// One row of `match-stream` output.
struct MatchStreamRow {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t samplers = 0;
  std::size_t opt = 0;
  std::size_t output_size = 0;
  double ratio = 1.0;
  std::size_t bytes = 0;
};

/// OPT / |output|, with 0/0 = 1 and x/0 = +inf.
double approximation_ratio(std::size_t opt, std::size_t output);

/// Runs the streaming matcher on s and measures it against the exact
/// optimum of the materialized graph.
MatchStreamRow match_stream(const UpdateStream& s, const MatcherConfig& cfg,
                            MatcherResult* result = nullptr);

void write_match_stream_csv(std::ostream& out, const MatchStreamRow& row);

/// `run-sim` CSV row: P, Q, k, budget, strategy, opt_lb, N, max_message_bytes, sum_overlap_Mp.
void write_run_sim_csv(std::ostream& out, const HardInstance& inst, const ProtocolRun& run);

enum class ExperimentKind { kMatchRandom, kMatchHard, kSimBudget };

std::string to_string(ExperimentKind kind);
/// Accepts "match-random", "match-hard" and "sim-budget".
ExperimentKind parse_experiment_kind(const std::string& name);

/// Parameter grids of a sweep. Only the grids relevant to `kind` are read;
/// every relevant grid must be non-empty.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kMatchRandom;
  std::vector<std::size_t> sides{100};  // vertices per side (match-random)
  std::vector<double> densities{0.2};   // edge probability (match-random)
  std::vector<std::size_t> ks{10};
  std::vector<double> cs{1.0};
  std::vector<double> deltas;  // empty: matcher default 1/n^2
  std::vector<double> churns{0.0};
  std::vector<std::size_t> parties{4};
  std::vector<std::size_t> qs{2};
  std::vector<std::size_t> group_sizes{8};
  std::vector<std::optional<std::size_t>> budgets{std::nullopt};
  Strategy strategy = Strategy::kAlg1;
  std::size_t trials = 1;
  std::uint64_t seed = 0;

  /// Throws InvalidParameter.
  void validate() const;
};

/// One point of the parameter grid.
struct ExperimentCell {
  ExperimentKind kind = ExperimentKind::kMatchRandom;
  std::size_t side = 0;
  double density = 0.0;
  std::size_t k = 1;
  double c = 1.0;
  std::optional<double> delta;
  double churn = 0.0;
  HardParams hard;
  std::optional<std::size_t> budget;
  Strategy strategy = Strategy::kAlg1;
};

struct TrialRecord {
  std::size_t n = 0;
  std::size_t samplers = 0;
  std::size_t opt = 0;
  std::size_t output_size = 0;
  double ratio = 1.0;
  std::size_t bytes = 0;
  std::size_t max_message_bytes = 0;
  std::size_t sum_overlap = 0;
  std::size_t invalid_edges = 0;  // output edges absent from the input graph
  bool exact_regime = false;      // k >= max(|A|, max degree)

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Cartesian product of the relevant grids, in a fixed order.
std::vector<ExperimentCell> expand_cells(const ExperimentSpec& spec);

/// Sub-seed of (cell, trial) under the master seed.
std::uint64_t trial_seed(std::uint64_t master, std::size_t cell, std::size_t trial);

/// Runs one trial; fully determined by (cell, sub_seed).
TrialRecord run_trial(const ExperimentCell& cell, std::uint64_t sub_seed);

/// Writes one CSV row per (cell, trial) and one aggregate row per cell
/// (mean ratio and its standard error). Rows are flushed as they are
/// produced. Returns the number of trial rows.
std::size_t run_experiment(const ExperimentSpec& spec, std::ostream& out);

}  // namespace dynmatch

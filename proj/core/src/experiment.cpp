#include "dynmatch/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "dynmatch/errors.hpp"
#include "dynmatch/seeding.hpp"

namespace dynmatch {

namespace {

std::string fixed6(double x) {
  if (std::isinf(x)) return "inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string general6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string budget_string(const std::optional<std::size_t>& budget) {
  return budget ? std::to_string(*budget) : "unlimited";
}

std::size_t count_invalid(const BipartiteGraph& g, const Matching& m) {
  return static_cast<std::size_t>(
      std::count_if(m.pairs.begin(), m.pairs.end(), [&](const Edge& e) { return !g.has_edge(e); }));
}

TrialRecord run_match_trial(const BipartiteGraph& g, const UpdateStream& s, const ExperimentCell& cell,
                            std::uint64_t matcher_seed) {
  MatcherConfig cfg;
  cfg.left_size = s.left_size;
  cfg.right_size = s.right_size;
  cfg.k = cell.k;
  cfg.c = cell.c;
  cfg.delta = cell.delta;
  cfg.seed = matcher_seed;

  StreamingMatcher matcher(cfg);
  matcher.consume(s);
  MatcherResult result = matcher.finalize();
  SpaceReport space = matcher.space_report();

  TrialRecord r;
  r.n = cfg.vertex_count();
  r.samplers = space.sketches;
  r.bytes = space.bytes;
  r.opt = maximum_matching(g).size();
  r.output_size = result.matching.size();
  r.ratio = approximation_ratio(r.opt, r.output_size);
  r.invalid_edges = count_invalid(g, result.matching);
  r.exact_regime = cell.k >= std::max(g.left_size(), g.max_left_degree());
  return r;
}

const char* kSweepHeader =
    "row,kind,cell,trial,sub_seed,n,side,density,k,c,delta,churn,P,Q,group_k,budget,strategy,"
    "samplers,opt,output_size,ratio,ratio_stderr,bytes,max_message_bytes,sum_overlap,invalid_edges\n";

void write_cell_columns(std::ostream& out, const ExperimentCell& cell, std::size_t n) {
  const bool match = cell.kind != ExperimentKind::kSimBudget;
  const bool random = cell.kind == ExperimentKind::kMatchRandom;
  std::string delta;
  if (match) {
    MatcherConfig cfg;
    cfg.left_size = n / 2;
    cfg.right_size = n - n / 2;
    cfg.delta = cell.delta;
    delta = general6(cfg.effective_delta());
  }
  out << n << ',' << (random ? std::to_string(cell.side) : "") << ','
      << (random ? general6(cell.density) : "") << ',' << cell.k << ','
      << (match ? general6(cell.c) : "") << ',' << delta << ',' << (match ? general6(cell.churn) : "")
      << ',';
  if (random) {
    out << ",,,";
  } else {
    out << cell.hard.parties << ',' << cell.hard.q << ',' << cell.hard.group_size << ',';
  }
  if (match) {
    out << ",,";
  } else {
    out << budget_string(cell.budget) << ',' << to_string(cell.strategy) << ',';
  }
}

}  // namespace

double approximation_ratio(std::size_t opt, std::size_t output) {
  if (output == 0) return opt == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  return static_cast<double>(opt) / static_cast<double>(output);
}

MatchStreamRow match_stream(const UpdateStream& s, const MatcherConfig& cfg, MatcherResult* result) {
  if (s.left_size != cfg.left_size || s.right_size != cfg.right_size) {
    throw InvalidParameter("matcher configuration does not match stream dimensions");
  }
  BipartiteGraph g = materialize(s);
  StreamingMatcher matcher(cfg);
  matcher.consume(s);
  MatcherResult r = matcher.finalize();
  SpaceReport space = matcher.space_report();

  MatchStreamRow row;
  row.n = cfg.vertex_count();
  row.k = cfg.k;
  row.samplers = space.sketches;
  row.opt = maximum_matching(g).size();
  row.output_size = r.matching.size();
  row.ratio = approximation_ratio(row.opt, row.output_size);
  row.bytes = space.bytes;
  if (result) *result = std::move(r);
  return row;
}

void write_match_stream_csv(std::ostream& out, const MatchStreamRow& row) {
  out << "n,k,samplers,opt,output_size,ratio,bytes\n";
  out << row.n << ',' << row.k << ',' << row.samplers << ',' << row.opt << ',' << row.output_size << ','
      << fixed6(row.ratio) << ',' << row.bytes << '\n';
}

void write_run_sim_csv(std::ostream& out, const HardInstance& inst, const ProtocolRun& run) {
  out << "P,Q,k,budget,strategy,opt_lb,N,max_message_bytes,sum_overlap_Mp\n";
  out << inst.params.parties << ',' << inst.params.q << ',' << run.config.k << ','
      << budget_string(run.config.budget_bytes) << ',' << to_string(run.config.strategy) << ','
      << inst.params.opt_lower_bound() << ',' << run.output.size() << ',' << run.max_message_bytes << ','
      << run.sum_hidden_overlap << '\n';
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kMatchRandom:
      return "match-random";
    case ExperimentKind::kMatchHard:
      return "match-hard";
    case ExperimentKind::kSimBudget:
      return "sim-budget";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "match-random") return ExperimentKind::kMatchRandom;
  if (name == "match-hard") return ExperimentKind::kMatchHard;
  if (name == "sim-budget") return ExperimentKind::kSimBudget;
  throw InvalidParameter("unknown experiment kind '" + name + "'");
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw InvalidParameter("trials must be >= 1");
  if (ks.empty()) throw InvalidParameter("k grid is empty");
  if (kind != ExperimentKind::kSimBudget) {
    if (cs.empty() || churns.empty()) throw InvalidParameter("c and churn grids must be non-empty");
  }
  if (kind == ExperimentKind::kMatchRandom) {
    if (sides.empty() || densities.empty()) throw InvalidParameter("side and density grids must be non-empty");
  } else {
    if (parties.empty() || qs.empty() || group_sizes.empty()) {
      throw InvalidParameter("P, Q and group size grids must be non-empty");
    }
  }
  if (kind == ExperimentKind::kSimBudget && budgets.empty()) throw InvalidParameter("budget grid is empty");
  for (const ExperimentCell& cell : expand_cells(*this)) {
    if (cell.kind != ExperimentKind::kMatchRandom) cell.hard.validate();
  }
}

std::vector<ExperimentCell> expand_cells(const ExperimentSpec& spec) {
  std::vector<ExperimentCell> cells;
  const std::vector<std::optional<double>> deltas = [&] {
    std::vector<std::optional<double>> d;
    for (double x : spec.deltas) d.emplace_back(x);
    if (d.empty()) d.emplace_back(std::nullopt);
    return d;
  }();

  std::vector<HardParams> hards;
  for (std::size_t P : spec.parties)
    for (std::size_t Q : spec.qs)
      for (std::size_t g : spec.group_sizes) hards.push_back({P, Q, g});

  ExperimentCell base;
  base.kind = spec.kind;
  base.strategy = spec.strategy;

  switch (spec.kind) {
    case ExperimentKind::kMatchRandom:
      for (std::size_t side : spec.sides)
        for (double density : spec.densities)
          for (std::size_t k : spec.ks)
            for (double c : spec.cs)
              for (const auto& delta : deltas)
                for (double churn : spec.churns) {
                  ExperimentCell cell = base;
                  cell.side = side;
                  cell.density = density;
                  cell.k = k;
                  cell.c = c;
                  cell.delta = delta;
                  cell.churn = churn;
                  cells.push_back(cell);
                }
      break;
    case ExperimentKind::kMatchHard:
      for (const HardParams& hard : hards)
        for (std::size_t k : spec.ks)
          for (double c : spec.cs)
            for (const auto& delta : deltas)
              for (double churn : spec.churns) {
                ExperimentCell cell = base;
                cell.hard = hard;
                cell.k = k;
                cell.c = c;
                cell.delta = delta;
                cell.churn = churn;
                cells.push_back(cell);
              }
      break;
    case ExperimentKind::kSimBudget:
      for (const HardParams& hard : hards)
        for (std::size_t k : spec.ks)
          for (const auto& budget : spec.budgets) {
            ExperimentCell cell = base;
            cell.hard = hard;
            cell.k = k;
            cell.budget = budget;
            cells.push_back(cell);
          }
      break;
  }
  return cells;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t cell, std::size_t trial) {
  return derive_seed(master, {cell, trial});
}

TrialRecord run_trial(const ExperimentCell& cell, std::uint64_t sub_seed) {
  const std::uint64_t graph_seed = derive_seed(sub_seed, {1});
  const std::uint64_t stream_seed = derive_seed(sub_seed, {2});
  const std::uint64_t algo_seed = derive_seed(sub_seed, {3});

  switch (cell.kind) {
    case ExperimentKind::kMatchRandom: {
      BipartiteGraph g = random_bipartite_graph(cell.side, cell.side, cell.density, graph_seed);
      UpdateStream s = stream_from_graph(g, cell.churn, stream_seed);
      return run_match_trial(g, s, cell, algo_seed);
    }
    case ExperimentKind::kMatchHard: {
      HardInstance inst = build_global(cell.hard, graph_seed);
      InstanceStreams streams = instance_to_streams(inst, cell.churn, stream_seed);
      return run_match_trial(inst.union_graph(), streams.union_stream, cell, algo_seed);
    }
    case ExperimentKind::kSimBudget: {
      HardInstance inst = build_global(cell.hard, graph_seed);
      ProtocolConfig cfg;
      cfg.k = cell.k;
      cfg.budget_bytes = cell.budget;
      cfg.strategy = cell.strategy;
      cfg.seed = algo_seed;
      ProtocolRun run = run_protocol(inst, cfg);
      BipartiteGraph g = inst.union_graph();
      TrialRecord r;
      r.n = cell.hard.vertex_count();
      r.opt = maximum_matching(g).size();
      r.output_size = run.output.size();
      r.ratio = approximation_ratio(r.opt, r.output_size);
      r.max_message_bytes = run.max_message_bytes;
      r.sum_overlap = run.sum_hidden_overlap;
      r.invalid_edges = count_invalid(g, run.output);
      for (const Message& m : run.messages) r.bytes += m.byte_size();
      return r;
    }
  }
  throw InvalidParameter("unknown experiment kind");
}

std::size_t run_experiment(const ExperimentSpec& spec, std::ostream& out) {
  spec.validate();
  const std::vector<ExperimentCell> cells = expand_cells(spec);
  std::size_t rows = 0;
  out << kSweepHeader;
  try {
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      const ExperimentCell& cell = cells[ci];
      std::vector<double> ratios;
      double output_sum = 0, opt_sum = 0, bytes_sum = 0;
      std::size_t n = 0;
      for (std::size_t t = 0; t < spec.trials; ++t) {
        const std::uint64_t sub = trial_seed(spec.seed, ci, t);
        const TrialRecord r = run_trial(cell, sub);
        n = r.n;
        out << "trial," << to_string(cell.kind) << ',' << ci << ',' << t << ',' << sub << ',';
        write_cell_columns(out, cell, r.n);
        out << r.samplers << ',' << r.opt << ',' << r.output_size << ',' << fixed6(r.ratio) << ",," << r.bytes
            << ',' << r.max_message_bytes << ',' << r.sum_overlap << ',' << r.invalid_edges << '\n';
        out.flush();
        ratios.push_back(r.ratio);
        output_sum += static_cast<double>(r.output_size);
        opt_sum += static_cast<double>(r.opt);
        bytes_sum += static_cast<double>(r.bytes);
        ++rows;
      }
      const double count = static_cast<double>(ratios.size());
      double mean = 0;
      for (double x : ratios) mean += x;
      mean /= count;
      double var = 0;
      for (double x : ratios) var += (x - mean) * (x - mean);
      const double stderr_ = ratios.size() > 1 ? std::sqrt(var / (count - 1) / count) : 0.0;
      out << "mean," << to_string(cell.kind) << ',' << ci << ",,,";
      write_cell_columns(out, cell, n);
      out << ',' << fixed6(opt_sum / count) << ',' << fixed6(output_sum / count) << ',' << fixed6(mean) << ','
          << fixed6(stderr_) << ',' << fixed6(bytes_sum / count) << ",,,\n";
      out.flush();
    }
  } catch (...) {
    out.flush();
    throw;
  }
  return rows;
}

}  // namespace dynmatch

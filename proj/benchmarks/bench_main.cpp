#include <benchmark/benchmark.h>

#include "dynmatch/graph.hpp"
#include "dynmatch/hard_instance.hpp"
#include "dynmatch/l0_sampler.hpp"
#include "dynmatch/sim_protocol.hpp"
#include "dynmatch/streaming_matcher.hpp"
#include "dynmatch/turnstile_stream.hpp"

using namespace dynmatch;

static void BM_SketchUpdate(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  L0Sketch sk(n, 0.01, 1);
  std::uint64_t i = 0;
  for (auto _ : state) {
    sk.update(i, 1);
    i = (i + 7919) % n;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SketchUpdate)->Arg(1 << 10)->Arg(1 << 20);

static void BM_SketchSample(benchmark::State& state) {
  L0Sketch sk(1 << 16, 0.01, 2);
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(state.range(0)); ++i) sk.update(i * 13 % (1 << 16), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sk.sample());
}
BENCHMARK(BM_SketchSample)->Arg(1)->Arg(100)->Arg(10000);

static void BM_HopcroftKarp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto g = random_bipartite_graph(n, n, 8.0 / static_cast<double>(n), 3);
  for (auto _ : state) benchmark::DoNotOptimize(maximum_matching(g));
  state.counters["edges"] = static_cast<double>(g.edge_count());
}
BENCHMARK(BM_HopcroftKarp)->Arg(1000)->Arg(10000);

static void BM_StreamingMatcher(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  auto g = random_bipartite_graph(200, 200, 0.05, 4);
  auto stream = stream_from_graph(g, 0.5, 4);
  MatcherConfig cfg;
  cfg.left_size = 200;
  cfg.right_size = 200;
  cfg.k = k;
  for (auto _ : state) benchmark::DoNotOptimize(run_streaming_matcher(cfg, stream));
  state.counters["updates"] = static_cast<double>(stream.updates.size());
}
BENCHMARK(BM_StreamingMatcher)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_Referee(benchmark::State& state) {
  HardParams hp;
  hp.parties = 8;
  hp.q = 2;
  hp.group_size = 16;
  auto inst = build_global(hp, 5);
  ProtocolConfig cfg;
  cfg.k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_protocol(inst, cfg));
}
BENCHMARK(BM_Referee)->Arg(16)->Arg(160);

BENCHMARK_MAIN();

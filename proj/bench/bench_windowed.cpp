// Serial reference vs the windowed parallel run on the same shuffled graph.
//   bench_windowed --benchmark_filter=ER

#include <benchmark/benchmark.h>

#include <map>

#include "detuf/forest.hpp"
#include "detuf/graph.hpp"
#include "detuf/windowed.hpp"

using namespace detuf;

namespace {

struct Input {
  EdgeSequence seq;
  LinkingStrategy strategy;
};

const Input& input(GraphKind kind, std::size_t n) {
  static std::map<std::pair<int, std::size_t>, Input> cache;
  const auto key = std::make_pair(static_cast<int>(kind), n);
  auto it = cache.find(key);
  if (it == cache.end()) {
    Rng rng(12345);
    const double p = kind == GraphKind::erdos_renyi ? 8.0 / static_cast<double>(n) : 0.0;
    EdgeSequence seq = shuffle(generate({kind, n, p}, rng), rng);
    LinkingStrategy st = LinkingStrategy::random(LinkKind::by_size, n, rng);
    it = cache.emplace(key, Input{std::move(seq), std::move(st)}).first;
  }
  return it->second;
}

template <GraphKind K>
void sequential(benchmark::State& state) {
  const Input& in = input(K, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto run = run_sequential(in.seq, in.strategy);
    benchmark::DoNotOptimize(run.success_set.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.seq.size()));
}

template <GraphKind K>
void windowed(benchmark::State& state) {
  const Input& in = input(K, static_cast<std::size_t>(state.range(0)));
  const auto policy = WindowPolicy::fixed(static_cast<std::size_t>(state.range(1)));
  const int threads = static_cast<int>(state.range(2));
  RunStats stats;
  for (auto _ : state) {
    auto run = run_windowed(in.seq, in.strategy, policy, threads);
    benchmark::DoNotOptimize(run.stats.success_set.data());
    stats = std::move(run.stats);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.seq.size()));
  state.counters["iterations"] = static_cast<double>(stats.iterations);
  state.counters["parent_reads"] = static_cast<double>(stats.work.parent_reads);
}

template <GraphKind K>
void adaptive(benchmark::State& state) {
  const Input& in = input(K, static_cast<std::size_t>(state.range(0)));
  const auto policy = WindowPolicy::adaptive(64, 16, 1 << 16);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto run = run_windowed(in.seq, in.strategy, policy, threads);
    benchmark::DoNotOptimize(run.stats.success_set.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.seq.size()));
}

}  // namespace

BENCHMARK(sequential<GraphKind::erdos_renyi>)->Name("ER/sequential")->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(windowed<GraphKind::erdos_renyi>)
    ->Name("ER/windowed")
    ->ArgsProduct({{1 << 16}, {256, 4096}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(adaptive<GraphKind::erdos_renyi>)
    ->Name("ER/adaptive")
    ->ArgsProduct({{1 << 16}, {1, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(sequential<GraphKind::cycle>)->Name("cycle/sequential")->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(windowed<GraphKind::cycle>)
    ->Name("cycle/windowed")
    ->ArgsProduct({{1 << 16}, {256}, {1, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();

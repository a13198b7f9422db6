// Parallel runner against the serial reference, and the position-hash xi
// kernel against the radius-k BFS reference.

#include <benchmark/benchmark.h>

#include "brw/mcstats.hpp"
#include "brw/replicas.hpp"

using namespace brw;

namespace {

auto xi_kernel(std::size_t dim, Index n, std::int32_t k) {
  return [=](std::uint64_t s, int attempt) {
    SnakeStreams streams(s);
    const auto t = gen_certified_snake(dim, n, k, PastMode::Compressed, streams, (64 * n) << attempt);
    return xi_k_all(t, k, n).sum();
  };
}

void BM_ReplicasSerial(benchmark::State& state) {
  const auto kernel = xi_kernel(17, 1024, 16);
  for (auto _ : state) {
    auto out = run_replicas_serial<std::int64_t>(1, static_cast<std::size_t>(state.range(0)), kernel);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ReplicasParallel(benchmark::State& state) {
  const auto kernel = xi_kernel(17, 1024, 16);
  for (auto _ : state) {
    auto out = run_replicas<std::int64_t>(1, static_cast<std::size_t>(state.range(0)), kernel, default_threads());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

SnakeTrajectory window(Index n, std::int32_t k) {
  SnakeStreams streams(99);
  return gen_certified_snake(9, n, k, PastMode::Compressed, streams, 1 << 24);
}

void BM_XiHash(benchmark::State& state) {
  const auto k = static_cast<std::int32_t>(state.range(0));
  const auto t = window(4096, k);
  for (auto _ : state) benchmark::DoNotOptimize(xi_k_all(t, k, 4096).sum());
  state.SetItemsProcessed(state.iterations() * 4096);
}

void BM_XiBfs(benchmark::State& state) {
  const auto k = static_cast<std::int32_t>(state.range(0));
  const auto t = window(4096, k);
  for (auto _ : state) benchmark::DoNotOptimize(xi_k_range_bfs(t, k, 1, 4096).sum());
  state.SetItemsProcessed(state.iterations() * 4096);
}

}  // namespace

BENCHMARK(BM_ReplicasSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicasParallel)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_XiHash)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_XiBfs)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();

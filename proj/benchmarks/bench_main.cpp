#include <benchmark/benchmark.h>

#include "jsnap/digest.hpp"
#include "jsnap/harness.hpp"
#include "jsnap/invariants.hpp"
#include "jsnap/oracle.hpp"

namespace {

using namespace jsnap;

// State after the demo schedule, the largest history the clients reach.
Execution demo_end() {
  static const Program prog = client_fig1();
  Execution ex(prog, false, false);
  for (const ThreadId tid : fig1_schedule(prog)) ex.advance(tid);
  return ex;
}

void BM_ExploreClientE(benchmark::State& state) {
  const Program prog = client_e();
  for (auto _ : state) {
    const ExplorationReport rep = explore(prog);
    benchmark::DoNotOptimize(rep.states);
  }
}
BENCHMARK(BM_ExploreClientE)->Unit(benchmark::kMillisecond);

void BM_ExploreClientEPrime(benchmark::State& state) {
  const Program prog = client_e_prime();
  for (auto _ : state) {
    const ExplorationReport rep = explore(prog);
    benchmark::DoNotOptimize(rep.states);
  }
}
BENCHMARK(BM_ExploreClientEPrime)->Unit(benchmark::kMillisecond);

void BM_RunDemoSchedule(benchmark::State& state) {
  const Program prog = client_fig1();
  const Schedule sched = fig1_schedule(prog);
  for (auto _ : state) benchmark::DoNotOptimize(run_schedule(prog, sched).steps.size());
}
BENCHMARK(BM_RunDemoSchedule);

void BM_CheckAll(benchmark::State& state) {
  const Execution ex = demo_end();
  for (auto _ : state) benchmark::DoNotOptimize(check_all(ex.phys(), ex.aux()).empty());
}
BENCHMARK(BM_CheckAll);

void BM_OmegaView(benchmark::State& state) {
  const Execution ex = demo_end();
  for (auto _ : state) {
    const OmegaView view(ex.aux());
    benchmark::DoNotOptimize(&view);
  }
}
BENCHMARK(BM_OmegaView);

void BM_StateKey(benchmark::State& state) {
  const Execution ex = demo_end();
  std::string buf;
  for (auto _ : state) {
    buf.clear();
    ex.append_state_key(buf);
    benchmark::DoNotOptimize(buf.data());
  }
}
BENCHMARK(BM_StateKey);

void BM_AuxDigest(benchmark::State& state) {
  const Execution ex = demo_end();
  for (auto _ : state) benchmark::DoNotOptimize(digest(ex.aux()));
}
BENCHMARK(BM_AuxDigest);

void BM_Linearizable(benchmark::State& state) {
  const Execution ex = demo_end();
  const std::vector<OpRecord> ops = ops_of(ex.trace());
  for (auto _ : state) benchmark::DoNotOptimize(linearizable(ops, {5, 0}).has_value());
}
BENCHMARK(BM_Linearizable);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <omp.h>

#include "rpr/lagrangian.hpp"
#include "rpr/tracker.hpp"

using namespace rpr;

namespace {

const AssembledProblem& rr_template() {
  return problem_template(ProblemKind{Stratum::regular_V, {Kind::rigid, Kind::rigid}});
}

const GenericSolutionSet& rr_generic() {
  static const GenericSolutionSet G = [] {
    TrackerSettings s;
    return ab_initio(rr_template(), StartStrategy::automatic, s);
  }();
  return G;
}

void BM_AbInitio(benchmark::State& state) {
  TrackerSettings s;
  s.parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto G = ab_initio(rr_template(), StartStrategy::automatic, s);
    benchmark::DoNotOptimize(G.endpoints.data());
  }
  state.counters["threads"] = s.parallel ? omp_get_max_threads() : 1;
}

void BM_UserHomotopy(benchmark::State& state) {
  TrackerSettings s;
  s.parallel = state.range(0) != 0;
  const auto& G = rr_generic();
  const auto P =
      build_regular_V({Kind::rigid, Kind::rigid}, anchor_positions(example_design(), MotionSpec::example56(), 1.0));
  for (auto _ : state) {
    auto r = track_user_homotopy(G, P, s);
    benchmark::DoNotOptimize(r.data());
  }
  state.counters["paths"] = static_cast<double>(G.endpoints.size());
  state.counters["threads"] = s.parallel ? omp_get_max_threads() : 1;
}

}  // namespace

// argument 0: serial reference, 1: OpenMP
BENCHMARK(BM_AbInitio)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UserHomotopy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "evtlab/dynamics.hpp"
#include "evtlab/evt.hpp"
#include "evtlab/haar.hpp"
#include "evtlab/lattice.hpp"
#include "evtlab/limit_laws.hpp"
#include "evtlab/observables.hpp"
#include "evtlab/stats.hpp"

using namespace evtlab;

namespace {

std::vector<LatticeFrame> haar_frames(std::size_t n) {
  Rng rng(Seed{1});
  std::vector<LatticeFrame> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(sample_haar_sl2(rng));
  }
  return out;
}

void BM_HaarSample(benchmark::State& state) {
  Rng rng(Seed{2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_haar_sl2(rng));
  }
}
BENCHMARK(BM_HaarSample);

void BM_DeltaObservable(benchmark::State& state) {
  const auto frames = haar_frames(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(delta_observable(frames[i++ & 1023]));
  }
}
BENCHMARK(BM_DeltaObservable);

// Shortest vector after a long flow, where the wide-precision path kicks in.
void BM_ShortestVectorSheared(benchmark::State& state) {
  const auto start = haar_frames(64);
  std::vector<LatticeFrame> frames;
  for (const auto& f : start) {
    frames.push_back(apply_flow(f, FlowSpec::geodesic(), static_cast<double>(state.range(0))));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(shortest_vector(frames[i++ & 63]));
  }
}
BENCHMARK(BM_ShortestVectorSheared)->Arg(10)->Arg(100)->Arg(1000);

void BM_ShortestVector3d(benchmark::State& state) {
  const FlowSpec flow({1.0, 0.0, -1.0});
  const std::vector<double> shear{1, 0.3, 0.1, 0, 1, 0.7, 0, 0, 1};
  std::vector<LatticeFrame> frames;
  for (int i = 0; i < 64; ++i) {
    frames.push_back(apply_flow(LatticeFrame::from_doubles(3, shear), flow, 0.1 * i));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(shortest_vector(frames[i++ & 63]));
  }
}
BENCHMARK(BM_ShortestVector3d);

void BM_Trajectory(benchmark::State& state) {
  const auto frames = haar_frames(256);
  const auto schedule = build_schedule(1.0, 1.3, 14);
  const auto obs = ObservableKind::shortest_vector();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trajectory(frames[i++ & 255], FlowSpec::geodesic(), schedule, obs));
  }
}
BENCHMARK(BM_Trajectory);

void BM_Excursion(benchmark::State& state) {
  const auto frames = haar_frames(1024);
  const BasePoint base;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(excursion_distance(frames[i++ & 1023], base));
  }
}
BENCHMARK(BM_Excursion);

void BM_NegLogReturn(benchmark::State& state) {
  const auto frames = haar_frames(1024);
  const BasePoint base;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(neg_log_return(frames[i++ & 1023], base));
  }
}
BENCHMARK(BM_NegLogReturn);

void BM_KsTwoSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(Seed{3});
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform01();
    b[i] = rng.uniform01();
  }
  const EmpiricalCDF fa(a), fb(b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks_distance(fa, fb));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KsTwoSample)->Range(1 << 10, 1 << 17)->Complexity(benchmark::oN);

void BM_IidExactKth(benchmark::State& state) {
  double p = 0.001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iid_exact_kth_cdf(p, 15, 3));
    p = p < 0.9 ? p * 1.01 : 0.001;
  }
}
BENCHMARK(BM_IidExactKth);

void BM_Ensemble(benchmark::State& state) {
  EnsembleSpec spec;
  spec.schedule = build_schedule(1.0, 1.3, 14);
  spec.samples = 2000;
  spec.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ensemble_run(spec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.samples));
}
BENCHMARK(BM_Ensemble)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

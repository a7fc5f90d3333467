#include <benchmark/benchmark.h>

#include <oustat/asympt.hpp>
#include <oustat/boltzmann.hpp>
#include <oustat/exact.hpp>
#include <oustat/modular.hpp>
#include <oustat/special.hpp>

using namespace oustat;

static void CountTable(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto counts = ou_counts(n);
    benchmark::DoNotOptimize(counts);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(CountTable)->RangeMultiplier(2)->Range(256, 2048)->Complexity()
    ->Unit(benchmark::kMillisecond);

static void RankMomentTable(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto mom = rank_moments(n, 2);
    benchmark::DoNotOptimize(mom);
  }
}
BENCHMARK(RankMomentTable)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void PartitionSeriesRounded(benchmark::State& state) {
  const long long n = state.range(0);
  for (auto _ : state) {
    auto v = rademacher_p_rounded(n);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(PartitionSeriesRounded)->Arg(100)->Arg(500)->Arg(1000)
    ->Unit(benchmark::kMicrosecond);

static void KloostermanRow(benchmark::State& state) {
  const long k = static_cast<long>(state.range(0));
  for (auto _ : state) {
    auto row = kloosterman_K1_row(k, 1000);
    benchmark::DoNotOptimize(row);
  }
}
BENCHMARK(KloostermanRow)->Arg(9)->Arg(33)->Arg(99)
    ->Unit(benchmark::kMicrosecond);

static void BesselPowerRatio(benchmark::State& state) {
  const double y = static_cast<double>(state.range(0));
  double nu = 1.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_i_power_ratio(nu, y, true));
    nu = (nu == 1.5) ? 7.5 : 1.5;
  }
}
BENCHMARK(BesselPowerRatio)->Arg(4)->Arg(400);

static void MomentTailSeries(benchmark::State& state) {
  const long long n = state.range(0);
  for (auto _ : state) {
    auto r = moment_asymptotic(n, 2);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(MomentTailSeries)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

static void SamplerSetup(benchmark::State& state) {
  const long long n = state.range(0);
  for (auto _ : state) {
    auto p = make_params(n);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(SamplerSetup)->Arg(10'000)->Arg(1'000'000)
    ->Unit(benchmark::kMillisecond);

static void SamplePeakOnly(benchmark::State& state) {
  const auto p = make_params(state.range(0));
  SplitMix64 rng(42);
  for (auto _ : state) {
    auto rec = sample_peak_only(p, rng);
    benchmark::DoNotOptimize(rec);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(SamplePeakOnly)->Arg(10'000)->Arg(1'000'000);

static void SampleFree(benchmark::State& state) {
  const auto p = make_params(state.range(0));
  SplitMix64 rng(42);
  for (auto _ : state) {
    auto rec = sample_free(p, rng);
    benchmark::DoNotOptimize(rec);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(SampleFree)->Arg(10'000)->Arg(1'000'000);

static void SampleExact(benchmark::State& state) {
  const auto p = make_params(state.range(0));
  SplitMix64 rng(42);
  for (auto _ : state) {
    auto s = sample_exact(p, rng, 1'000'000);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(SampleExact)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

static void TransformSuite(benchmark::State& state) {
  const long k_max = static_cast<long>(state.range(0));
  for (auto _ : state) {
    auto rep = verify_transform_suite(k_max);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(TransformSuite)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

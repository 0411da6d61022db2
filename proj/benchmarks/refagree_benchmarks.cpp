#include <benchmark/benchmark.h>

#include <vector>

#include "refagree/bootstrap.hpp"
#include "refagree/peer_model.hpp"
#include "refagree/random.hpp"
#include "refagree/simulation.hpp"
#include "refagree/stats.hpp"

namespace {

using namespace refagree;

std::vector<double> uniform_values(std::size_t n, std::uint64_t seed) {
  RandomSource rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = 0.01 + rng.uniform();
  return v;
}

void BM_Quantile(benchmark::State& state) {
  const auto v = uniform_values(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(quantile(v, 0.975));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Quantile)->Arg(1000)->Arg(100000);

void BM_Mad(benchmark::State& state) {
  const auto a = uniform_values(static_cast<std::size_t>(state.range(0)), 2);
  const auto b = uniform_values(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(mad(a, b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Mad)->Arg(100)->Arg(10000);

void BM_ConditionalSample(benchmark::State& state) {
  const ModelConfig model{0.1, 1.0};
  const bool four = state.range(0) != 0;
  RandomSource rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(sample_conditional_log_value(-0.5, four, model, rng));
}
BENCHMARK(BM_ConditionalSample)->Arg(0)->Arg(1);

void BM_ResampleInstitution(benchmark::State& state) {
  const ModelConfig model{0.1, 1.0};
  const InstitutionModel inst{0.0, state.range(0), static_cast<double>(state.range(0) / 2)};
  RandomSource rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(resample_institution(inst, model, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ResampleInstitution)->Arg(50)->Arg(500);

void BM_RunBootstrap(benchmark::State& state) {
  SyntheticConfig sc;
  sc.seed = 6;
  const auto ds = generate_synthetic(sc);
  BootstrapConfig config;
  config.n_samples = static_cast<std::size_t>(state.range(0));
  config.seed = 7;
  config.model = {0.1, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(run_bootstrap(ds, config));
}
BENCHMARK(BM_RunBootstrap)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

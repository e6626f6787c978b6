#include <benchmark/benchmark.h>

#include "wavemap/evolution.hpp"
#include "wavemap/gamma.hpp"
#include "wavemap/hyp_infty.hpp"
#include "wavemap/profiles.hpp"
#include "wavemap/slp.hpp"

#include <random>

using namespace wavemap;

static void bm_log_gamma(benchmark::State& state) {
  std::complex<double> z(0.25 + state.range(0), 0.66);
  for (auto _ : state) benchmark::DoNotOptimize(log_gamma_complex(z));
}
BENCHMARK(bm_log_gamma)->Arg(1)->Arg(1000)->Arg(100000);

static void bm_m_coefficient(benchmark::State& state) {
  const double mu = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(m_coefficient(-mu * mu).m);
}
BENCHMARK(bm_m_coefficient)->Arg(5)->Arg(600);

static void bm_shoot_profile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(shoot_profile(n, 1, 1e-12).b());
}
BENCHMARK(bm_shoot_profile)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void bm_shooting_mismatch(benchmark::State& state) {
  static const SLProblem prob = SLProblem::from_profile(shoot_profile(2, 1, 1e-12));
  const double mu = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(shooting_mismatch(prob, mu));
}
BENCHMARK(bm_shooting_mismatch)->Arg(5)->Arg(58)->Arg(1000)->Unit(benchmark::kMicrosecond);

static void bm_infty_phase_roots(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(infty_eigenvalues(3).records.size());
}
BENCHMARK(bm_infty_phase_roots)->Unit(benchmark::kMillisecond);

static void bm_evolve(benchmark::State& state) {
  static const SLProblem prob = SLProblem::from_profile(profile_closed_form_f0());
  const auto op = DiscreteOperator::build(prob, static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  const auto seed = ModeSeed::random_smooth(rng);
  EvolutionOptions o;
  o.output_interval = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(op, seed, 1.0, o).back().energy);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_evolve)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMillisecond)->Complexity();

static void bm_discrete_spectrum(benchmark::State& state) {
  static const SLProblem prob = SLProblem::from_profile(profile_closed_form_f0());
  const auto op = DiscreteOperator::build(prob, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(discrete_spectrum(op).front());
}
BENCHMARK(bm_discrete_spectrum)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "szo/es_sim.hpp"
#include "szo/experiments.hpp"
#include "szo/objectives.hpp"
#include "szo/optimizers.hpp"

namespace {

using namespace szo;

std::shared_ptr<const RidgeObjective> ridge(std::size_t d, std::size_t n) {
  RngStream rng(1);
  return std::make_shared<RidgeObjective>(
      std::make_shared<const RidgeDataset>(gen_ridge(d, n, DenseVector::Ones(static_cast<Eigen::Index>(d)), 0.1, 0.3, rng)));
}

void BM_Step(benchmark::State& state, Method method) {
  const auto d = static_cast<std::size_t>(state.range(0));
  auto objective = ridge(d, 20 * d);
  ObjectiveOracle oracle(objective);
  SzoHyperparams hp;
  hp.eta = 1e-9;
  hp.alpha = 0.9;
  hp.beta = 1.0;
  DirectionSource dirs{RngStream(2)};
  HlfState s = HlfState::start(DenseVector::Zero(static_cast<Eigen::Index>(d)));
  for (auto _ : state) {
    switch (method) {
      case Method::vanilla_szo: step_vanilla(s, oracle, hp, dirs); break;
      case Method::hf_szo: step_hf(s, oracle, hp, dirs); break;
      case Method::lf_szo: step_lf(s, oracle, hp, dirs); break;
      case Method::two_point_sym: step_two_point_symmetric(s, oracle, hp, dirs); break;
      default: step_hlf(s, oracle, hp, dirs); break;
    }
    benchmark::DoNotOptimize(s.x.data());
    if (s.diverged) {
      state.PauseTiming();
      s = HlfState::start(DenseVector::Zero(static_cast<Eigen::Index>(d)));
      state.ResumeTiming();
    }
  }
  state.SetItemsProcessed(state.iterations());
}

BENCHMARK_CAPTURE(BM_Step, vanilla, Method::vanilla_szo)->Arg(5)->Arg(50);
BENCHMARK_CAPTURE(BM_Step, hf, Method::hf_szo)->Arg(5)->Arg(50);
BENCHMARK_CAPTURE(BM_Step, lf, Method::lf_szo)->Arg(5)->Arg(50);
BENCHMARK_CAPTURE(BM_Step, hlf, Method::hlf_szo)->Arg(5)->Arg(50);
BENCHMARK_CAPTURE(BM_Step, two_point_sym, Method::two_point_sym)->Arg(5)->Arg(50);

void BM_SampleSphere(benchmark::State& state) {
  RngStream rng(3);
  const auto d = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_sphere(rng, d));
}
BENCHMARK(BM_SampleSphere)->Arg(2)->Arg(50);

void BM_AverageDynamics(benchmark::State& state) {
  const ScalarFunction quartic = [](double x) { return x * x * x * x; };
  for (auto _ : state) benchmark::DoNotOptimize(average_dynamics(quartic, 1.0, 0.01, 100.0));
}
BENCHMARK(BM_AverageDynamics);

void BM_Aggregate(benchmark::State& state) {
  std::vector<Trace> traces(100, Trace(false));
  RngStream rng(4);
  for (Trace& t : traces) {
    for (std::int64_t k = 0; k <= 500; ++k) t.record(k, DenseVector::Zero(1), rng.uniform(), static_cast<std::uint64_t>(k));
  }
  const std::vector<bool> alive(traces.size(), false);
  for (auto _ : state) benchmark::DoNotOptimize(aggregate(traces, alive, 0.0));
}
BENCHMARK(BM_Aggregate);

}  // namespace

BENCHMARK_MAIN();

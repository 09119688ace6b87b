#include <benchmark/benchmark.h>

#include "giftrl/data.hpp"
#include "giftrl/ftrl.hpp"
#include "giftrl/iwa.hpp"
#include "giftrl/scalar_math.hpp"
#include "giftrl/surrogate.hpp"

namespace {

using namespace giftrl;

void BM_LambertW(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w(x));
    x = x < 1e5 ? x * 1.1 : 0.1;
  }
}
BENCHMARK(BM_LambertW);

void BM_IwaClosedForm(benchmark::State& state) {
  const LossFamily family = static_cast<LossFamily>(state.range(0));
  const ScalarLoss loss(family, 1.0, 2.0);
  const IwaContext ctx{loss, family == LossFamily::Logarithmic ? 0.4 : 0.3, 1.7, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(iwa_scaling_closed_form(ctx));
}
BENCHMARK(BM_IwaClosedForm)->DenseRange(0, 3);

void BM_ProxCoeff(benchmark::State& state) {
  const LossFamily family = static_cast<LossFamily>(state.range(0));
  const ScalarLoss loss(family, 1.0, 2.0);
  SurrogateInstance inst{loss, family == LossFamily::Logarithmic ? 0.4 : 0.3,
                         0.6, 4.0, 1.7, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(prox_coeff(inst));
}
BENCHMARK(BM_ProxCoeff)->DenseRange(0, 3);

void BM_LearnerStep(benchmark::State& state) {
  const Strategy strategy = static_cast<Strategy>(state.range(0));
  const Dataset data = synth_dataset(Task::BinaryPM1, 4096, 32, 0.1, 7);
  LearnerOptions opt;
  opt.strategy = strategy;
  opt.eta0 = 0.5;
  Learner learner(data.dim, LossFamily::Logistic, opt);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(learner.step(data.examples[i]));
    i = (i + 1) % data.size();
  }
}
BENCHMARK(BM_LearnerStep)->DenseRange(0, 3);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}

// Serial reference kernels against their OpenMP counterparts.
//
//   ./pinn_bench --benchmark_filter=LossGradient
//
// Arg 0 selects the execution mode (0 serial, 1 parallel).

#include <benchmark/benchmark.h>
#include <omp.h>

#include "pinn/experiment.hpp"
#include "pinn/geometry.hpp"
#include "pinn/init.hpp"
#include "pinn/loss.hpp"
#include "pinn/ntk.hpp"

namespace {

using namespace pinn;

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

NetworkParams moved_network(int m) {
  NetworkParams net = symmetric_init({2.0, m, 2, 1}, Activation());
  net.theta() += 0.3 * Mat::Random(m, 2);
  return net;
}

void LossGradient(benchmark::State& st) {
  const PoissonProblem prob = reference_disc_problem();
  const NetworkParams net = moved_network(static_cast<int>(st.range(1)));
  Rng rng(1);
  const SampleSet s = draw_samples(prob.domain, 4096, 4096, rng);
  Mat grad;
  for (auto _ : st) benchmark::DoNotOptimize(loss_and_gradient(prob, net, s, grad, mode(st)).total);
  st.counters["threads"] = st.range(0) ? omp_get_max_threads() : 1;
}
BENCHMARK(LossGradient)->ArgsProduct({{0, 1}, {32, 256}})->Unit(benchmark::kMillisecond);

void ExactLossMc(benchmark::State& st) {
  const PoissonProblem prob = reference_disc_problem();
  const NetworkParams net = moved_network(64);
  Rng rng(2);
  for (auto _ : st) benchmark::DoNotOptimize(exact_loss_mc(prob, net, 20000, 20000, rng, mode(st)).std_error);
}
BENCHMARK(ExactLossMc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void NtkGram(benchmark::State& st) {
  Rng rng(3);
  const Mat pts = 2.0 * Mat::Random(64, 2);
  const Mat thetas = draw_kernel_samples(2.0, 2, 20000, rng);
  for (auto _ : st) benchmark::DoNotOptimize(ntk_gram_on(Activation(), thetas, pts, mode(st)).sum());
}
BENCHMARK(NtkGram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Arg 0 is the worker count here.
void WidthSweep(benchmark::State& st) {
  const PoissonProblem prob = reference_disc_problem();
  ExperimentConfig cfg;
  cfg.widths = {4, 6, 10, 14, 20, 24, 30};
  cfg.runs_per_width = 500;
  cfg.train_template.p = 40.0;
  cfg.workers = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(run_experiment(prob, Activation(), cfg).fitted_slope);
}
BENCHMARK(WidthSweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

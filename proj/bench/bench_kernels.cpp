// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS to vary the
// thread count.

#include <benchmark/benchmark.h>

#include <numeric>

#include "dldl/construct.hpp"
#include "dldl/kernels.hpp"
#include "dldl/metrics.hpp"
#include "dldl/rng.hpp"
#include "dldl/synth.hpp"

using namespace dldl;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::kParallel : Execution::kSerial;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_BatchGradient(benchmark::State& state) {
  AgeTaskParams p;
  p.n_train = 512;
  p.n_val = 1;
  const auto task = gen_age(p);
  Dataset data;
  data.dim = task.dim;
  data.features.assign(task.features.begin(), task.features.begin() + 512 * task.dim);
  for (std::size_t i = 0; i < 512; ++i) {
    const auto y = gaussian_1d(task.labels, task.mu[i], task.sigma[i]);
    data.targets.emplace_back(y.mass().begin(), y.mass().end());
  }
  const auto net = init_gaussian({{task.dim, 256, 256, 85}, Head::kDistribution}, 1, 0.1);
  std::vector<std::size_t> batch(static_cast<std::size_t>(state.range(1)));
  std::iota(batch.begin(), batch.end(), std::size_t{0});
  const SampleObjective kl = [&](std::size_t i, std::span<const double> out, std::span<double> g) {
    return sample_objective(LossKind::kKl, 0.0, data.targets[i], out, g);
  };
  BatchWorkspace ws(net, batch.size());
  Gradients grad = Gradients::zeros_like(net);
  for (auto _ : state) {
    benchmark::DoNotOptimize(batch_gradient(net, data, batch, kl, grad, ws, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_BatchGradient)->ArgsProduct({{0, 1}, {32, 128, 512}})->Unit(benchmark::kMicrosecond);

void BM_SmoothSegmentation(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(1));
  const auto seg = gen_seg(1, side, side, 20, 3);
  const auto field = SpatialLabelField::from_labels(side, side, 21, seg.maps[0]);
  const auto kernel = gaussian_kernel(5, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smooth_segmentation(field, kernel, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1) * state.range(1));
  label(state);
}
BENCHMARK(BM_SmoothSegmentation)->ArgsProduct({{0, 1}, {64, 256}})->Unit(benchmark::kMicrosecond);

void BM_ConfusionMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  Rng rng(4);
  std::vector<int> pred(n), truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = static_cast<int>(rng.index(21));
    pred[i] = rng.index(4) ? truth[i] : static_cast<int>(rng.index(21));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(confusion_matrix(pred, truth, 21, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_ConfusionMatrix)->ArgsProduct({{0, 1}, {1 << 16, 1 << 20}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

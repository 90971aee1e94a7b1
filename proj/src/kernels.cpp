#include "dldl/kernels.hpp"

#include <algorithm>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dldl/error.hpp"

namespace dldl {

int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

BatchWorkspace::BatchWorkspace(const Network& net, std::size_t slots)
    : caches_(std::max<std::size_t>(slots, 1)),
      deltas_(caches_.size()),
      sample_grad_(Gradients::zeros_like(net)),
      grad_out_(caches_.size(), std::vector<double>(net.output_width())),
      losses_(caches_.size(), 0.0) {}

double batch_gradient(const Network& net, const Dataset& data,
                      std::span<const std::size_t> batch, const SampleObjective& objective,
                      Gradients& mean_grad, BatchWorkspace& ws, Execution exec) {
  require(!batch.empty(), "empty batch");
  if (mean_grad.layers.size() != net.layers.size()) mean_grad = Gradients::zeros_like(net);
  mean_grad.set_zero();
  double loss_sum = 0.0;

  if (exec == Execution::kSerial) {
    for (std::size_t s : batch) {
      forward(net, data.row(s), ws.caches_[0]);
      loss_sum += objective(s, ws.caches_[0].output(), ws.grad_out_[0]);
      backward(net, ws.caches_[0], ws.grad_out_[0], ws.sample_grad_);
      mean_grad.add(ws.sample_grad_);
    }
  } else {
    require(batch.size() <= ws.slots(), "batch larger than the workspace");
    const auto n = static_cast<std::ptrdiff_t>(batch.size());
    // Exceptions must not escape the parallel region.
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto slot = static_cast<std::size_t>(i);
      try {
        const std::size_t s = batch[slot];
        forward(net, data.row(s), ws.caches_[slot]);
        ws.losses_[slot] = objective(s, ws.caches_[slot].output(), ws.grad_out_[slot]);
        backward_deltas(net, ws.caches_[slot], ws.grad_out_[slot], ws.deltas_[slot]);
      } catch (...) {
#pragma omp critical(dldl_batch_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    const std::size_t slots = batch.size();
    for (std::size_t slot = 0; slot < slots; ++slot) loss_sum += ws.losses_[slot];
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
      const std::size_t in = net.layers[li].in;
      const auto out = static_cast<std::ptrdiff_t>(net.layers[li].out);
      auto& g = mean_grad.layers[li];
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t o = 0; o < out; ++o) {
        const auto unit = static_cast<std::size_t>(o);
        double* gw = g.weights.data() + unit * in;
        double gb = 0.0;
        for (std::size_t slot = 0; slot < slots; ++slot) {
          const double d = ws.deltas_[slot][li][unit];
          const double* x = ws.caches_[slot].activations[li].data();
          for (std::size_t i = 0; i < in; ++i) gw[i] += d * x[i];
          gb += d;
        }
        g.biases[unit] = gb;
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  mean_grad.scale(inv);
  return loss_sum * inv;
}

std::vector<double> predict_batch(const Network& net, const Dataset& data, Execution exec) {
  require(data.dim == net.input_width(), "feature width does not match the network");
  const std::size_t width = net.output_width();
  std::vector<double> out(data.size() * width);
  const auto n = static_cast<std::ptrdiff_t>(data.size());
  auto one = [&](std::ptrdiff_t i, ForwardCache& cache) {
    const auto row = static_cast<std::size_t>(i);
    const auto y = forward(net, data.row(row), cache);
    std::copy(y.begin(), y.end(), out.begin() + static_cast<std::ptrdiff_t>(row * width));
  };
  if (exec == Execution::kSerial) {
    ForwardCache cache;
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i, cache);
  } else {
#pragma omp parallel
    {
      ForwardCache cache;
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < n; ++i) one(i, cache);
    }
  }
  return out;
}

}  // namespace dldl

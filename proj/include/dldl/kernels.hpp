#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dldl/execution.hpp"
#include "dldl/net.hpp"

namespace dldl {

// Loss of one sample given the network output; writes d loss / d output.
using SampleObjective = std::function<double(std::size_t sample, std::span<const double> output,
                                             std::span<double> grad_output)>;

/// Scratch buffers for batch kernels, one slot per batch position.
class BatchWorkspace {
 public:
  BatchWorkspace(const Network& net, std::size_t slots);

  std::size_t slots() const { return caches_.size(); }

 private:
  friend double batch_gradient(const Network&, const Dataset&, std::span<const std::size_t>,
                               const SampleObjective&, Gradients&, BatchWorkspace&, Execution);
  std::vector<ForwardCache> caches_;
  std::vector<std::vector<std::vector<double>>> deltas_;
  Gradients sample_grad_;
  std::vector<std::vector<double>> grad_out_;
  std::vector<double> losses_;
};

/// Mean loss and mean parameter gradient over `batch`.
///
/// The serial reference backpropagates one sample at a time and adds its
/// gradient to the running sum. The parallel path backpropagates samples
/// concurrently into per-slot layer deltas, then forms the weight gradients in
/// parallel over output units, each entry summed over samples in batch order.
/// Every entry sees the serial addition order, so both paths are
/// bit-identical for any thread count.
double batch_gradient(const Network& net, const Dataset& data,
                      std::span<const std::size_t> batch, const SampleObjective& objective,
                      Gradients& mean_grad, BatchWorkspace& ws,
                      Execution exec = Execution::kParallel);

// Network outputs for every sample, row-major n x output_width.
std::vector<double> predict_batch(const Network& net, const Dataset& data,
                                  Execution exec = Execution::kParallel);

}  // namespace dldl

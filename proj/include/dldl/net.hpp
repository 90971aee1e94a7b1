#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "dldl/execution.hpp"
#include "dldl/loss.hpp"

namespace dldl {

enum class Activation { kNone, kRelu, kTanh };
enum class Head { kDistribution, kRegression };

std::string_view to_string(Activation a);
std::string_view to_string(Head h);
Activation activation_from_string(std::string_view name);
Head head_from_string(std::string_view name);

/// Fully connected layer; weights are out x in, row-major.
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> biases;
  Activation activation = Activation::kNone;
};

/// Ordered dense layers. Hidden layers use ReLU; the last layer is linear
/// (distribution head, raw logits) or tanh (regression head).
struct Network {
  std::vector<DenseLayer> layers;
  Head head = Head::kDistribution;
  // Bumped by every parameter update; forward caches remember it.
  std::uint64_t version = 0;

  std::size_t input_width() const { return layers.front().in; }
  std::size_t output_width() const { return layers.back().out; }
  std::size_t parameter_count() const;
  // Throws InputError on inconsistent shapes or non-finite parameters.
  void validate() const;
};

/// Layer widths including input and output, e.g. {8, 64, 64, 85}.
struct Architecture {
  std::vector<std::size_t> widths;
  Head head = Head::kDistribution;
};

inline constexpr double kInitStddev = 0.01;

// Weights ~ N(0, stddev^2) from Rng(seed), biases zero.
Network init_gaussian(const Architecture& arch, std::uint64_t seed,
                      double stddev = kInitStddev);

struct ForwardCache {
  const Network* net = nullptr;
  std::uint64_t version = 0;
  // activations[0] is the input; activations[l + 1] the output of layer l.
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> pre;

  std::span<const double> output() const { return activations.back(); }
};

std::span<const double> forward(const Network& net, std::span<const double> input,
                                ForwardCache& cache);
std::vector<double> forward(const Network& net, std::span<const double> input);

struct LayerGradient {
  std::vector<double> weights;
  std::vector<double> biases;
};

struct Gradients {
  std::vector<LayerGradient> layers;

  static Gradients zeros_like(const Network& net);
  void set_zero();
  void add(const Gradients& other);
  void scale(double factor);
  bool all_finite() const;
};

// Gradients of a scalar objective with respect to every parameter, given
// d objective / d network output. Overwrites `grads`. Throws InputError if
// the cache was not produced by `net` at its current version.
void backward(const Network& net, const ForwardCache& cache,
              std::span<const double> grad_output, Gradients& grads);

// d objective / d pre-activation of every layer; deltas[l] has width
// layers[l].out. The weight gradient of layer l is deltas[l] x activations[l].
void backward_deltas(const Network& net, const ForwardCache& cache,
                     std::span<const double> grad_output,
                     std::vector<std::vector<double>>& deltas);

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  double weight_decay = 0.0005;
  std::size_t batch_size = 128;
  int epochs = 20;
  std::uint64_t seed = 0;
  double init_std = kInitStddev;
  LossKind loss = LossKind::kKl;
  double eps_ins = kDefaultEpsIns;
  // Step decay: lr *= lr_decay every lr_decay_every epochs (0 = constant).
  double lr_decay = 1.0;
  int lr_decay_every = 0;

  void validate() const;
};

// v <- momentum * v - lr * (g + decay * w);  w <- w + v.
// Decay applies to weights only. Throws NumericalError on non-finite gradients.
void sgd_step(Network& net, const Gradients& grads, const TrainConfig& config,
              Gradients& velocity);

/// Row-major features with per-sample targets: a distribution over the
/// output classes, or regression targets in [-1, 1].
struct Dataset {
  std::size_t dim = 0;
  std::vector<double> features;
  std::vector<std::vector<double>> targets;

  std::size_t size() const { return targets.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features).subspan(i * dim, dim);
  }
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  std::vector<double> train_mae;  // one entry per monitored decoder
  std::vector<double> val_mae;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
};

struct MonitorResult {
  std::vector<double> train_mae;
  std::vector<double> val_mae;
};
using EpochMonitor = std::function<MonitorResult(const Network&)>;

struct TrainResult {
  Network net;
  TrainHistory history;
};

// Loss value and d loss / d output for one sample; used by the trainer and
// by gradient checks.
double sample_objective(LossKind kind, double eps_ins, std::span<const double> target,
                        std::span<const double> output, std::span<double> grad_output);

// Seeded mini-batch SGD. A pure function of (data, arch, config).
TrainResult train(const Dataset& data, const Architecture& arch, const TrainConfig& config,
                  const EpochMonitor& monitor = {},
                  Execution exec = Execution::kParallel);

}  // namespace dldl

#include "dldl/net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dldl/error.hpp"
#include "dldl/kernels.hpp"
#include "dldl/rng.hpp"

namespace dldl {

namespace {

double activate(Activation a, double x) {
  switch (a) {
    case Activation::kRelu: return x > 0.0 ? x : 0.0;
    case Activation::kTanh: return std::tanh(x);
    case Activation::kNone: break;
  }
  return x;
}

double activation_slope(Activation a, double pre, double out) {
  switch (a) {
    case Activation::kRelu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh: return 1.0 - out * out;
    case Activation::kNone: break;
  }
  return 1.0;
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kNone: return "none";
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
  }
  return "unknown";
}

std::string_view to_string(Head h) {
  return h == Head::kDistribution ? "distribution" : "regression";
}

Activation activation_from_string(std::string_view name) {
  for (auto a : {Activation::kNone, Activation::kRelu, Activation::kTanh}) {
    if (to_string(a) == name) return a;
  }
  throw InputError("unknown activation '" + std::string(name) + "'");
}

Head head_from_string(std::string_view name) {
  if (name == "distribution") return Head::kDistribution;
  if (name == "regression") return Head::kRegression;
  throw InputError("unknown head '" + std::string(name) + "'");
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.biases.size();
  return n;
}

void Network::validate() const {
  require(!layers.empty(), "network has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    require(l.in > 0 && l.out > 0, "layer widths must be positive");
    require(l.weights.size() == l.in * l.out && l.biases.size() == l.out,
            "layer " + std::to_string(i) + " parameter shape mismatch");
    if (i > 0) {
      require(layers[i - 1].out == l.in,
              "layer " + std::to_string(i) + " input width does not match previous output");
    }
    for (double w : l.weights) require(std::isfinite(w), "non-finite weight");
    for (double b : l.biases) require(std::isfinite(b), "non-finite bias");
  }
  const Activation last = layers.back().activation;
  require(head == Head::kDistribution ? last == Activation::kNone : last == Activation::kTanh,
          "last layer activation does not match the network head");
}

Network init_gaussian(const Architecture& arch, std::uint64_t seed, double stddev) {
  require(arch.widths.size() >= 2, "architecture needs at least one layer");
  for (auto w : arch.widths) require(w > 0, "layer widths must be positive");
  Rng rng(seed);
  Network net;
  net.head = arch.head;
  const std::size_t count = arch.widths.size() - 1;
  for (std::size_t i = 0; i < count; ++i) {
    DenseLayer layer;
    layer.in = arch.widths[i];
    layer.out = arch.widths[i + 1];
    layer.weights.resize(layer.in * layer.out);
    for (double& w : layer.weights) w = rng.normal(0.0, stddev);
    layer.biases.assign(layer.out, 0.0);
    const bool last = i + 1 == count;
    layer.activation = !last ? Activation::kRelu
                             : (arch.head == Head::kRegression ? Activation::kTanh
                                                               : Activation::kNone);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

std::span<const double> forward(const Network& net, std::span<const double> input,
                                ForwardCache& cache) {
  require(input.size() == net.input_width(), "input width does not match the network");
  const std::size_t n = net.layers.size();
  cache.net = &net;
  cache.version = net.version;
  cache.activations.resize(n + 1);
  cache.pre.resize(n);
  cache.activations[0].assign(input.begin(), input.end());
  for (std::size_t li = 0; li < n; ++li) {
    const DenseLayer& l = net.layers[li];
    const auto& x = cache.activations[li];
    auto& z = cache.pre[li];
    auto& a = cache.activations[li + 1];
    z.resize(l.out);
    a.resize(l.out);
    for (std::size_t o = 0; o < l.out; ++o) {
      const double* w = l.weights.data() + o * l.in;
      double s = l.biases[o];
      for (std::size_t i = 0; i < l.in; ++i) s += w[i] * x[i];
      z[o] = s;
      a[o] = activate(l.activation, s);
    }
  }
  return cache.output();
}

std::vector<double> forward(const Network& net, std::span<const double> input) {
  ForwardCache cache;
  const auto out = forward(net, input, cache);
  return {out.begin(), out.end()};
}

Gradients Gradients::zeros_like(const Network& net) {
  Gradients g;
  g.layers.resize(net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    g.layers[i].weights.assign(net.layers[i].weights.size(), 0.0);
    g.layers[i].biases.assign(net.layers[i].biases.size(), 0.0);
  }
  return g;
}

void Gradients::set_zero() {
  for (auto& l : layers) {
    std::fill(l.weights.begin(), l.weights.end(), 0.0);
    std::fill(l.biases.begin(), l.biases.end(), 0.0);
  }
}

void Gradients::add(const Gradients& other) {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto& dst = layers[i];
    const auto& src = other.layers[i];
    for (std::size_t k = 0; k < dst.weights.size(); ++k) dst.weights[k] += src.weights[k];
    for (std::size_t k = 0; k < dst.biases.size(); ++k) dst.biases[k] += src.biases[k];
  }
}

void Gradients::scale(double factor) {
  for (auto& l : layers) {
    for (double& v : l.weights) v *= factor;
    for (double& v : l.biases) v *= factor;
  }
}

bool Gradients::all_finite() const {
  for (const auto& l : layers) {
    for (double v : l.weights) if (!std::isfinite(v)) return false;
    for (double v : l.biases) if (!std::isfinite(v)) return false;
  }
  return true;
}

void backward_deltas(const Network& net, const ForwardCache& cache,
                     std::span<const double> grad_output,
                     std::vector<std::vector<double>>& deltas) {
  if (cache.net != &net || cache.version != net.version ||
      cache.activations.size() != net.layers.size() + 1) {
    throw InputError("stale forward intermediates");
  }
  require(grad_output.size() == net.output_width(), "output gradient width mismatch");
  deltas.resize(net.layers.size());
  std::vector<double> upstream(grad_output.begin(), grad_output.end());
  for (std::size_t li = net.layers.size(); li-- > 0;) {
    const DenseLayer& l = net.layers[li];
    const auto& z = cache.pre[li];
    const auto& a = cache.activations[li + 1];
    auto& delta = deltas[li];
    delta.resize(l.out);
    for (std::size_t o = 0; o < l.out; ++o) {
      delta[o] = upstream[o] * activation_slope(l.activation, z[o], a[o]);
    }
    if (li == 0) break;
    upstream.assign(l.in, 0.0);
    for (std::size_t o = 0; o < l.out; ++o) {
      const double* w = l.weights.data() + o * l.in;
      for (std::size_t i = 0; i < l.in; ++i) upstream[i] += w[i] * delta[o];
    }
  }
}

void backward(const Network& net, const ForwardCache& cache,
              std::span<const double> grad_output, Gradients& grads) {
  std::vector<std::vector<double>> deltas;
  backward_deltas(net, cache, grad_output, deltas);
  if (grads.layers.size() != net.layers.size()) grads = Gradients::zeros_like(net);
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    const DenseLayer& l = net.layers[li];
    const auto& x = cache.activations[li];
    auto& g = grads.layers[li];
    for (std::size_t o = 0; o < l.out; ++o) {
      const double d = deltas[li][o];
      double* gw = g.weights.data() + o * l.in;
      for (std::size_t i = 0; i < l.in; ++i) gw[i] = d * x[i];
      g.biases[o] = d;
    }
  }
}

void TrainConfig::validate() const {
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate must be > 0");
  require(momentum >= 0.0 && momentum < 1.0, "momentum must be in [0, 1)");
  require(weight_decay >= 0.0, "weight_decay must be >= 0");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(epochs >= 1, "epochs must be >= 1");
  require(init_std > 0.0 && std::isfinite(init_std), "init_std must be > 0");
  require(eps_ins >= 0.0, "eps_ins must be >= 0");
  require(lr_decay > 0.0 && lr_decay <= 1.0, "lr_decay must be in (0, 1]");
  require(lr_decay_every >= 0, "lr_decay_every must be >= 0");
}

void sgd_step(Network& net, const Gradients& grads, const TrainConfig& config,
              Gradients& velocity) {
  require(grads.layers.size() == net.layers.size(), "gradient shape mismatch");
  if (!grads.all_finite()) throw NumericalError("non-finite gradient; training aborted");
  if (velocity.layers.size() != net.layers.size()) velocity = Gradients::zeros_like(net);
  const double lr = config.learning_rate;
  const double mu = config.momentum;
  const double decay = config.weight_decay;
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    auto& layer = net.layers[li];
    const auto& g = grads.layers[li];
    auto& v = velocity.layers[li];
    require(g.weights.size() == layer.weights.size() && g.biases.size() == layer.biases.size(),
            "gradient shape mismatch");
    for (std::size_t k = 0; k < layer.weights.size(); ++k) {
      v.weights[k] = mu * v.weights[k] - lr * (g.weights[k] + decay * layer.weights[k]);
      layer.weights[k] += v.weights[k];
    }
    for (std::size_t k = 0; k < layer.biases.size(); ++k) {
      v.biases[k] = mu * v.biases[k] - lr * g.biases[k];
      layer.biases[k] += v.biases[k];
    }
  }
  ++net.version;
}

double sample_objective(LossKind kind, double eps_ins, std::span<const double> target,
                        std::span<const double> output, std::span<double> grad_output) {
  switch (kind) {
    case LossKind::kKl: {
      const auto p = softmax_values(output);
      for (std::size_t j = 0; j < p.size(); ++j) grad_output[j] = p[j] - target[j];
      return kl_loss_from_logits(target, output);
    }
    case LossKind::kAlphaDiv: {
      const auto p = softmax_values(output);
      const auto g = alpha_div_grad_logits(target, p);
      std::copy(g.begin(), g.end(), grad_output.begin());
      return alpha_div_loss(target, p);
    }
    default: {
      double total = 0.0;
      for (std::size_t j = 0; j < output.size(); ++j) {
        const auto r = regression_loss(kind, target[j], output[j], eps_ins);
        total += r.value;
        grad_output[j] = r.grad;
      }
      return total;
    }
  }
}

TrainResult train(const Dataset& data, const Architecture& arch, const TrainConfig& config,
                  const EpochMonitor& monitor, Execution exec) {
  config.validate();
  require(data.size() > 0, "training set is empty");
  require(data.features.size() == data.size() * data.dim, "feature matrix shape mismatch");
  require(!arch.widths.empty() && arch.widths.front() == data.dim,
          "architecture input width does not match the features");
  const bool dist_loss = is_distribution_loss(config.loss);
  require(dist_loss == (arch.head == Head::kDistribution),
          "loss '" + std::string(to_string(config.loss)) + "' does not match the network head");
  const std::size_t out_width = arch.widths.back();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& t = data.targets[i];
    require(t.size() == out_width, "target width does not match the network output");
    if (dist_loss) {
      require(is_distribution(t), "sample " + std::to_string(i) + " target is not a distribution");
    } else {
      for (double v : t) require(v >= -1.0 && v <= 1.0, "regression target outside [-1, 1]");
    }
  }

  TrainResult result{init_gaussian(arch, config.seed, config.init_std), {}};
  Network& net = result.net;
  Rng shuffler(Rng::derive(config.seed, 1));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const std::size_t batch = std::min(config.batch_size, data.size());
  BatchWorkspace ws(net, batch);
  Gradients grads = Gradients::zeros_like(net);
  Gradients velocity = Gradients::zeros_like(net);
  TrainConfig step_config = config;

  const SampleObjective objective = [&](std::size_t s, std::span<const double> out,
                                        std::span<double> grad_out) {
    return sample_objective(config.loss, config.eps_ins, data.targets[s], out, grad_out);
  };

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.lr_decay_every > 0 && epoch > 1 && (epoch - 1) % config.lr_decay_every == 0) {
      step_config.learning_rate *= config.lr_decay;
    }
    shuffler.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      const std::span<const std::size_t> idx(order.data() + start, len);
      const double mean_loss = batch_gradient(net, data, idx, objective, grads, ws, exec);
      if (!std::isfinite(mean_loss)) throw NumericalError("non-finite training loss");
      loss_sum += mean_loss * static_cast<double>(len);
      sgd_step(net, grads, step_config, velocity);
    }
    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(data.size());
    if (monitor) {
      auto m = monitor(net);
      record.train_mae = std::move(m.train_mae);
      record.val_mae = std::move(m.val_mae);
    }
    result.history.epochs.push_back(std::move(record));
  }
  return result;
}

}  // namespace dldl

#include "dldl/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "dldl/loss.hpp"
#include "dldl/net.hpp"
#include "dldl/rng.hpp"

namespace dldl {

namespace {

constexpr double kKinkMargin = 1e-6;
constexpr double kReluMargin = 1e-3;

std::vector<double> random_distribution(Rng& rng, std::size_t n) {
  std::vector<double> y(n);
  double total = 0.0;
  for (double& v : y) {
    v = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
    total += v;
  }
  if (total == 0.0) {
    y[rng.index(n)] = 1.0;
    return y;
  }
  for (double& v : y) v /= total;
  return y;
}

std::vector<double> random_vector(Rng& rng, std::size_t n, double scale) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform(-scale, scale);
  return x;
}

double central_difference(const std::function<double(double)>& f, double x) {
  return (f(x + kGradCheckStep) - f(x - kGradCheckStep)) / (2.0 * kGradCheckStep);
}

void record(GradCheckResult& r, double analytic, double numeric) {
  r.max_rel_error = std::max(r.max_rel_error, relative_error(analytic, numeric));
  ++r.entries;
}

// d loss / d logits of a distribution objective, through softmax.
GradCheckResult check_logit_loss(const std::string& name, LossKind kind, Rng& rng,
                                 std::size_t cases) {
  GradCheckResult r;
  r.name = name;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = 2 + rng.index(9);
    const auto y = random_distribution(rng, n);
    auto x = random_vector(rng, n, 3.0);
    std::vector<double> grad(n);
    sample_objective(kind, 0.0, y, x, grad);
    std::vector<double> scratch(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double saved = x[j];
      const double numeric = central_difference(
          [&](double v) {
            x[j] = v;
            return sample_objective(kind, 0.0, y, x, scratch);
          },
          saved);
      x[j] = saved;
      record(r, grad[j], numeric);
    }
    ++r.cases;
  }
  return r;
}

GradCheckResult check_regression_loss(const std::string& name, LossKind kind, Rng& rng,
                                      std::size_t cases) {
  GradCheckResult r;
  r.name = name;
  while (r.cases < cases) {
    const double t = rng.uniform(-1.0, 1.0);
    const double p = rng.uniform(-1.0, 1.0);
    const double eps = kDefaultEpsIns;
    const double d = std::abs(p - t);
    const bool kink = (kind != LossKind::kL2 && d < kKinkMargin) ||
                      (kind == LossKind::kEpsIns && std::abs(d - eps) < kKinkMargin);
    if (kink) {
      ++r.skipped;
      continue;
    }
    const auto analytic = regression_loss(kind, t, p, eps);
    const double numeric = central_difference(
        [&](double v) { return regression_loss(kind, t, v, eps).value; }, p);
    record(r, analytic.grad, numeric);
    ++r.cases;
  }
  return r;
}

GradCheckResult check_tanh(Rng& rng, std::size_t cases) {
  GradCheckResult r;
  r.name = "tanh_head";
  for (std::size_t c = 0; c < cases; ++c) {
    const double x = rng.uniform(-3.0, 3.0);
    record(r, tanh_head(x).grad,
           central_difference([](double v) { return tanh_head(v).value; }, x));
    ++r.cases;
  }
  return r;
}

bool near_relu_kink(const ForwardCache& cache) {
  for (std::size_t l = 0; l + 1 < cache.pre.size(); ++l) {
    for (double z : cache.pre[l]) {
      if (std::abs(z) < kReluMargin) return true;
    }
  }
  return false;
}

// Every weight and bias of a {6, 10, 8, out} network against finite differences.
GradCheckResult check_network(const std::string& name, LossKind kind, Rng& rng,
                              std::size_t cases) {
  GradCheckResult r;
  r.name = name;
  const bool dist = is_distribution_loss(kind);
  const std::size_t out = dist ? 7 : 2;
  Architecture arch{{6, 10, 8, out}, dist ? Head::kDistribution : Head::kRegression};
  while (r.cases < cases) {
    Network net = init_gaussian(arch, rng.word(), 0.5);
    for (auto& layer : net.layers) {
      for (double& b : layer.biases) b = rng.uniform(-0.2, 0.2);
    }
    const auto input = random_vector(rng, arch.widths.front(), 1.0);
    std::vector<double> target;
    if (dist) {
      target = random_distribution(rng, out);
    } else {
      target = random_vector(rng, out, 0.9);
    }
    ForwardCache cache;
    forward(net, input, cache);
    if (near_relu_kink(cache)) {
      ++r.skipped;
      continue;
    }
    std::vector<double> grad_out(out);
    sample_objective(kind, kDefaultEpsIns, target, cache.output(), grad_out);
    Gradients grads;
    backward(net, cache, grad_out, grads);

    std::vector<double> scratch(out);
    auto objective = [&]() {
      const auto y = forward(net, input);
      return sample_objective(kind, kDefaultEpsIns, target, y, scratch);
    };
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      auto check_params = [&](std::vector<double>& params, const std::vector<double>& analytic) {
        for (std::size_t k = 0; k < params.size(); ++k) {
          const double saved = params[k];
          const double numeric = central_difference(
              [&](double v) {
                params[k] = v;
                return objective();
              },
              saved);
          params[k] = saved;
          record(r, analytic[k], numeric);
        }
      };
      check_params(net.layers[l].weights, grads.layers[l].weights);
      check_params(net.layers[l].biases, grads.layers[l].biases);
    }
    ++r.cases;
  }
  return r;
}

}  // namespace

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), kGradCheckFloor});
  return std::abs(analytic - numeric) / scale;
}

double GradCheckReport::max_rel_error() const {
  double m = 0.0;
  for (const auto& r : results) m = std::max(m, r.max_rel_error);
  return m;
}

GradCheckReport run_gradcheck(std::uint64_t seed, std::size_t cases) {
  GradCheckReport report;
  report.seed = seed;
  Rng rng(seed);
  report.results.push_back(check_logit_loss("kl_logits", LossKind::kKl, rng, cases));
  report.results.push_back(check_logit_loss("alpha_div_logits", LossKind::kAlphaDiv, rng, cases));
  report.results.push_back(check_regression_loss("l2", LossKind::kL2, rng, cases));
  report.results.push_back(check_regression_loss("l1", LossKind::kL1, rng, cases));
  report.results.push_back(check_regression_loss("eps_ins", LossKind::kEpsIns, rng, cases));
  report.results.push_back(check_tanh(rng, cases));
  report.results.push_back(check_network("network_kl", LossKind::kKl, rng, cases));
  report.results.push_back(check_network("network_alpha_div", LossKind::kAlphaDiv, rng, cases));
  report.results.push_back(check_network("network_l2", LossKind::kL2, rng, cases));
  return report;
}

}  // namespace dldl

#include "dldl/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dldl/error.hpp"

namespace dldl {

namespace {

double log_sum_exp(std::span<const double> x) {
  const double top = *std::max_element(x.begin(), x.end());
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - top);
  return top + std::log(sum);
}

void require_finite(std::span<const double> x) {
  require(!x.empty(), "empty logit vector");
  for (double v : x) require(std::isfinite(v), "logits must be finite");
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kKl: return "kl";
    case LossKind::kAlphaDiv: return "alpha_div";
    case LossKind::kL2: return "l2";
    case LossKind::kL1: return "l1";
    case LossKind::kEpsIns: return "eps_ins";
  }
  return "unknown";
}

LossKind loss_kind_from_string(std::string_view name) {
  for (auto k : {LossKind::kKl, LossKind::kAlphaDiv, LossKind::kL2, LossKind::kL1,
                 LossKind::kEpsIns}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown loss kind '" + std::string(name) + "'");
}

bool is_distribution_loss(LossKind kind) {
  return kind == LossKind::kKl || kind == LossKind::kAlphaDiv;
}

std::vector<double> softmax_values(std::span<const double> logits) {
  require_finite(logits);
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    p[j] = std::exp(logits[j] - top);
    sum += p[j];
  }
  for (double& v : p) v /= sum;
  return p;
}

LabelDistribution softmax(std::span<const double> logits) {
  return LabelDistribution(softmax_values(logits));
}

double kl_loss(const LabelDistribution& y, const LabelDistribution& yhat) {
  require(y.size() == yhat.size(), "distribution length mismatch");
  double t = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k] == 0.0) continue;
    require(yhat[k] > 0.0, "prediction is zero where the target has mass");
    t -= y[k] * std::log(yhat[k]);
  }
  return t;
}

double kl_loss_from_logits(std::span<const double> y, std::span<const double> logits) {
  require(y.size() == logits.size(), "distribution length mismatch");
  const double lse = log_sum_exp(logits);
  double t = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k] > 0.0) t -= y[k] * (logits[k] - lse);
  }
  return t;
}

std::vector<double> kl_grad_logits(const LabelDistribution& y, const LabelDistribution& yhat) {
  require(y.size() == yhat.size(), "distribution length mismatch");
  std::vector<double> g(y.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = yhat[j] - y[j];
  return g;
}

double softmax_cross_entropy(std::size_t label, std::span<const double> logits) {
  require(label < logits.size(), "class label out of range");
  return -(logits[label] - log_sum_exp(logits));
}

std::vector<double> softmax_cross_entropy_grad(std::size_t label,
                                               std::span<const double> logits) {
  require(label < logits.size(), "class label out of range");
  auto g = softmax_values(logits);
  g[label] -= 1.0;
  return g;
}

double alpha_div_loss(std::span<const double> y, std::span<const double> yhat) {
  require(y.size() == yhat.size(), "distribution length mismatch");
  double t = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double d = std::sqrt(y[k]) - std::sqrt(yhat[k]);
    t += d * d;
  }
  return 2.0 * t;
}

std::vector<double> alpha_div_grad_logits(std::span<const double> y,
                                          std::span<const double> yhat) {
  require(y.size() == yhat.size(), "distribution length mismatch");
  std::vector<double> root(y.size());
  double s = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    root[k] = std::sqrt(y[k] * yhat[k]);
    s += root[k];
  }
  std::vector<double> g(y.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = 2.0 * (yhat[j] * s - root[j]);
  return g;
}

double normalize_target(double value, double min, double max) {
  require(max > min, "target range needs max > min");
  return 2.0 * (value - min) / (max - min) - 1.0;
}

double denormalize_target(double t, double min, double max) {
  require(max > min, "target range needs max > min");
  return (t + 1.0) * (max - min) / 2.0 + min;
}

LossValue regression_loss(LossKind kind, double target, double prediction, double eps) {
  const double d = prediction - target;
  const double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
  switch (kind) {
    case LossKind::kL2: return {d * d, 2.0 * d};
    case LossKind::kL1: return {std::abs(d), sign};
    case LossKind::kEpsIns: {
      require(eps >= 0.0, "epsilon-insensitive tube must be nonnegative");
      const double excess = std::abs(d) - eps;
      if (excess <= 0.0) return {0.0, 0.0};
      return {excess, sign};
    }
    default: break;
  }
  throw InputError("'" + std::string(to_string(kind)) + "' is not a regression loss");
}

LossValue tanh_head(double x) {
  const double t = std::tanh(x);
  return {t, 1.0 - t * t};
}

}  // namespace dldl

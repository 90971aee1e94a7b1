#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "dldl/label_space.hpp"

namespace dldl {

// Objectives a network can be trained under.
enum class LossKind { kKl, kAlphaDiv, kL2, kL1, kEpsIns };

std::string_view to_string(LossKind kind);
LossKind loss_kind_from_string(std::string_view name);
bool is_distribution_loss(LossKind kind);

inline constexpr double kDefaultEpsIns = 0.1;

// --- distribution objectives -------------------------------------------------

// exp(x_j - max x) / sum_t exp(x_t - max x)
LabelDistribution softmax(std::span<const double> logits);
std::vector<double> softmax_values(std::span<const double> logits);

// T = -sum_k y_k ln yhat_k. Terms with y_k == 0 contribute nothing; a zero
// yhat_k where y_k > 0 is rejected.
double kl_loss(const LabelDistribution& y, const LabelDistribution& yhat);

// Same objective evaluated from logits through log-softmax, used by the trainer.
double kl_loss_from_logits(std::span<const double> y, std::span<const double> logits);

// yhat - y
std::vector<double> kl_grad_logits(const LabelDistribution& y, const LabelDistribution& yhat);

// Classification baseline: -ln softmax(x)_label.
double softmax_cross_entropy(std::size_t label, std::span<const double> logits);
std::vector<double> softmax_cross_entropy_grad(std::size_t label,
                                               std::span<const double> logits);

/// Squared-Hellinger form of the alpha-divergence baseline:
///   T = 2 * sum_k (sqrt(y_k) - sqrt(yhat_k))^2,  0 <= T <= 4.
/// Through softmax, with S = sum_k sqrt(y_k yhat_k):
///   dT/dx_j = 2 * (yhat_j * S - sqrt(y_j yhat_j)).
double alpha_div_loss(std::span<const double> y, std::span<const double> yhat);
std::vector<double> alpha_div_grad_logits(std::span<const double> y,
                                          std::span<const double> yhat);

// --- regression baseline -----------------------------------------------------

// 2 (v - min) / (max - min) - 1 and its inverse.
double normalize_target(double value, double min, double max);
double denormalize_target(double t, double min, double max);

struct LossValue {
  double value;
  double grad;  // d value / d prediction
};

// l2: (p - t)^2;  l1: |p - t|;  eps_ins: max(0, |p - t| - eps).
// Subgradient 0 at kinks and inside the eps tube.
LossValue regression_loss(LossKind kind, double target, double prediction,
                          double eps = kDefaultEpsIns);

LossValue tanh_head(double x);

}  // namespace dldl

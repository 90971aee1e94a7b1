#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dldl {

inline constexpr double kGradCheckStep = 1e-5;
inline constexpr double kGradCheckTolerance = 1e-4;
// Denominator floor of the relative error, so exact zeros compare as equal.
inline constexpr double kGradCheckFloor = 1e-6;

// |a - n| / max(|a|, |n|, floor)
double relative_error(double analytic, double numeric);

struct GradCheckResult {
  std::string name;
  std::size_t cases = 0;     // random cases evaluated
  std::size_t skipped = 0;   // cases redrawn because they sat on a kink
  std::size_t entries = 0;   // gradient entries compared
  double max_rel_error = 0.0;
};

struct GradCheckReport {
  std::uint64_t seed = 0;
  std::vector<GradCheckResult> results;

  double max_rel_error() const;
  bool passed(double tolerance = kGradCheckTolerance) const {
    return max_rel_error() <= tolerance;
  }
};

/// Central finite differences (step 1e-5) against every analytic gradient:
/// logit gradients of KL and alpha-divergence, prediction derivatives of the
/// l2 / l1 / eps-insensitive losses and the tanh head, and full parameter
/// gradients of a 2-hidden-layer network under KL, alpha-divergence and l2.
GradCheckReport run_gradcheck(std::uint64_t seed, std::size_t cases = 100);

}  // namespace dldl

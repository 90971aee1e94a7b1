#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dldl/execution.hpp"
#include "dldl/label_space.hpp"

namespace dldl {

enum class LabelLevel { kPositive, kDifficult, kNegative };

/// Per-class annotation level of a multi-label image; at least one Positive.
class MultiLabelLevels {
 public:
  explicit MultiLabelLevels(std::vector<LabelLevel> levels);
  std::size_t size() const { return levels_.size(); }
  LabelLevel operator[](std::size_t i) const { return levels_[i]; }
  const std::vector<LabelLevel>& levels() const { return levels_; }

 private:
  std::vector<LabelLevel> levels_;
};

struct MultiLabelWeights {
  double positive = 1.0;
  double difficult = 0.3;
  double negative = 0.0;
  double epsilon = 0.01;
};

/// K x K nonnegative weights summing to 1, with padding and stride.
struct SmoothingKernel {
  std::size_t size = 1;
  std::vector<double> weights;  // row-major K x K
  std::size_t padding = 0;
  std::size_t stride = 1;

  double at(std::size_t r, std::size_t c) const { return weights[r * size + c]; }
};

// Normalized Gaussian over the label set; sigma == 0 yields the one-hot at
// nearest_index(mu).
LabelDistribution gaussian_1d(const LabelSet1D& set, double mu, double sigma);

// Isotropic bivariate normal over the grid, normalized over all cells.
JointLabelDistribution gaussian_2d(const LabelGrid2D& grid, std::pair<double, double> mu,
                                   double sigma);

// Level weights, l1-normalized, then mixed with eps/C uniform mass and
// renormalized by 1 + eps.
LabelDistribution multilabel(const MultiLabelLevels& levels, const MultiLabelWeights& w);

LabelDistribution one_hot(const LabelSet1D& set, double value);
LabelDistribution one_hot_index(std::size_t size, std::size_t index);

// (1 - eps) * target + eps * uniform
LabelDistribution label_smoothing(const LabelDistribution& target, double epsilon);

// Sampled at integer offsets from the center; padding (K-1)/2, stride 1.
SmoothingKernel gaussian_kernel(std::size_t size, double sigma = 1.0);

// Per-class zero-padded convolution followed by per-pixel renormalization.
SpatialLabelField smooth_segmentation(const SpatialLabelField& field,
                                      const SmoothingKernel& kernel,
                                      Execution exec = Execution::kParallel);

}  // namespace dldl

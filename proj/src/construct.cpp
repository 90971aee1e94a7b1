#include "dldl/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dldl/error.hpp"

namespace dldl {

namespace {

// exp(e - max e) normalized; the Gaussian's constant factor cancels.
std::vector<double> normalize_exponents(std::vector<double> e) {
  const double top = *std::max_element(e.begin(), e.end());
  double sum = 0.0;
  for (double& v : e) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : e) v /= sum;
  return e;
}

void smooth_row(const SpatialLabelField& in, const SmoothingKernel& kernel,
                std::vector<double>& out, std::size_t i) {
  const std::size_t h = in.height();
  const std::size_t w = in.width();
  const std::size_t c = in.classes();
  const auto k = static_cast<std::ptrdiff_t>(kernel.size);
  const auto pad = static_cast<std::ptrdiff_t>(kernel.padding);
  const auto stride = static_cast<std::ptrdiff_t>(kernel.stride);
  for (std::size_t j = 0; j < w; ++j) {
    double* dst = out.data() + (i * w + j) * c;
    for (std::ptrdiff_t a = 0; a < k; ++a) {
      const std::ptrdiff_t si = static_cast<std::ptrdiff_t>(i) * stride - pad + a;
      if (si < 0 || si >= static_cast<std::ptrdiff_t>(h)) continue;
      for (std::ptrdiff_t b = 0; b < k; ++b) {
        const std::ptrdiff_t sj = static_cast<std::ptrdiff_t>(j) * stride - pad + b;
        if (sj < 0 || sj >= static_cast<std::ptrdiff_t>(w)) continue;
        const double f = kernel.weights[static_cast<std::size_t>(a * k + b)];
        const auto src = in.pixel(static_cast<std::size_t>(si), static_cast<std::size_t>(sj));
        for (std::size_t cls = 0; cls < c; ++cls) dst[cls] += f * src[cls];
      }
    }
    double total = 0.0;
    for (std::size_t cls = 0; cls < c; ++cls) total += dst[cls];
    for (std::size_t cls = 0; cls < c; ++cls) dst[cls] /= total;
  }
}

}  // namespace

MultiLabelLevels::MultiLabelLevels(std::vector<LabelLevel> levels)
    : levels_(std::move(levels)) {
  require(std::find(levels_.begin(), levels_.end(), LabelLevel::kPositive) != levels_.end(),
          "multi-label annotation needs at least one Positive class");
}

LabelDistribution gaussian_1d(const LabelSet1D& set, double mu, double sigma) {
  require(std::isfinite(mu), "mu must be finite");
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be nonnegative");
  if (sigma == 0.0) return one_hot(set, mu);
  std::vector<double> e(set.size());
  const double denom = 2.0 * sigma * sigma;
  for (std::size_t j = 0; j < set.size(); ++j) {
    const double d = set.value(j) - mu;
    e[j] = -(d * d) / denom;
  }
  return LabelDistribution(normalize_exponents(std::move(e)));
}

JointLabelDistribution gaussian_2d(const LabelGrid2D& grid, std::pair<double, double> mu,
                                   double sigma) {
  require(std::isfinite(mu.first) && std::isfinite(mu.second), "mu must be finite");
  require(sigma > 0.0 && std::isfinite(sigma), "2-D sigma must be positive");
  const double denom = 2.0 * sigma * sigma;
  std::vector<double> e(grid.size());
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    const double dp = grid.pitch()[r] - mu.first;
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      const double dy = grid.yaw()[c] - mu.second;
      e[r * grid.cols() + c] = -(dp * dp + dy * dy) / denom;
    }
  }
  return JointLabelDistribution(grid.rows(), grid.cols(), normalize_exponents(std::move(e)));
}

LabelDistribution multilabel(const MultiLabelLevels& levels, const MultiLabelWeights& w) {
  require(w.positive > w.difficult && w.difficult > w.negative && w.negative >= 0.0,
          "level probabilities must satisfy pP > pD > pN >= 0");
  require(w.epsilon >= 0.0 && std::isfinite(w.epsilon), "epsilon must be nonnegative");
  const std::size_t n = levels.size();
  std::vector<double> y(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    switch (levels[k]) {
      case LabelLevel::kPositive: y[k] = w.positive; break;
      case LabelLevel::kDifficult: y[k] = w.difficult; break;
      case LabelLevel::kNegative: y[k] = w.negative; break;
    }
    total += y[k];
  }
  require(total > 0.0, "multi-label weights sum to zero");
  const double uniform = w.epsilon / static_cast<double>(n);
  for (double& v : y) v = (v / total + uniform) / (1.0 + w.epsilon);
  return LabelDistribution(std::move(y));
}

LabelDistribution one_hot_index(std::size_t size, std::size_t index) {
  require(index < size, "one-hot index out of range");
  std::vector<double> y(size, 0.0);
  y[index] = 1.0;
  return LabelDistribution(std::move(y));
}

LabelDistribution one_hot(const LabelSet1D& set, double value) {
  return one_hot_index(set.size(), set.nearest_index(value));
}

LabelDistribution label_smoothing(const LabelDistribution& target, double epsilon) {
  require(epsilon >= 0.0 && epsilon <= 1.0, "label smoothing epsilon must be in [0, 1]");
  const double u = epsilon / static_cast<double>(target.size());
  std::vector<double> y(target.size());
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = (1.0 - epsilon) * target[k] + u;
  return LabelDistribution(std::move(y));
}

SmoothingKernel gaussian_kernel(std::size_t size, double sigma) {
  require(size >= 1 && size % 2 == 1, "kernel size must be odd");
  require(sigma > 0.0 && std::isfinite(sigma), "kernel sigma must be positive");
  SmoothingKernel kernel;
  kernel.size = size;
  kernel.padding = (size - 1) / 2;
  kernel.stride = 1;
  kernel.weights.resize(size * size);
  const auto half = static_cast<double>(kernel.padding);
  double total = 0.0;
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double dr = static_cast<double>(r) - half;
      const double dc = static_cast<double>(c) - half;
      const double v = std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
      kernel.weights[r * size + c] = v;
      total += v;
    }
  }
  for (double& v : kernel.weights) v /= total;
  return kernel;
}

SpatialLabelField smooth_segmentation(const SpatialLabelField& field,
                                      const SmoothingKernel& kernel, Execution exec) {
  require(kernel.size % 2 == 1 && kernel.weights.size() == kernel.size * kernel.size,
          "malformed smoothing kernel");
  require(kernel.padding == (kernel.size - 1) / 2 && kernel.stride == 1,
          "smoothing must preserve the image shape (P = (K-1)/2, S = 1)");
  require(kernel.size <= field.height() && kernel.size <= field.width(),
          "kernel larger than image");
  double total = 0.0;
  for (double v : kernel.weights) {
    require(v >= 0.0, "kernel weights must be nonnegative");
    total += v;
  }
  require(std::abs(total - 1.0) <= kNormTolerance, "kernel weights must sum to 1");

  std::vector<double> out(field.mass().size(), 0.0);
  const auto rows = static_cast<std::ptrdiff_t>(field.height());
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
      smooth_row(field, kernel, out, static_cast<std::size_t>(i));
    }
  } else {
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
      smooth_row(field, kernel, out, static_cast<std::size_t>(i));
    }
  }
  return SpatialLabelField(field.height(), field.width(), field.classes(), std::move(out));
}

}  // namespace dldl

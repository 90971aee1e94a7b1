#include "dldl/label_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dldl/error.hpp"

namespace dldl {

namespace {

void require_increasing(std::span<const double> v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    require(v[i] > v[i - 1], std::string(what) + " must be strictly increasing");
  }
}

}  // namespace

LabelSet1D LabelSet1D::make_range(double min, double max, double step) {
  require(std::isfinite(min) && std::isfinite(max) && std::isfinite(step),
          "label range must be finite");
  require(step > 0.0, "label step must be positive");
  require(max > min, "label max must exceed min");
  const double intervals = (max - min) / step;
  const double rounded = std::round(intervals);
  require(std::abs(intervals - rounded) <= kNormTolerance * std::max(1.0, rounded),
          "label range is not an integer multiple of the step");
  const auto n = static_cast<std::size_t>(rounded) + 1;
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = min + static_cast<double>(i) * step;
  values.back() = max;
  return LabelSet1D(std::move(values), step);
}

std::size_t LabelSet1D::nearest_index(double v) const {
  return dldl::nearest_index(values_, v);
}

std::size_t nearest_index(std::span<const double> sorted, double v) {
  if (v <= sorted.front()) return 0;
  if (v >= sorted.back()) return sorted.size() - 1;
  // First element >= v; the answer is it or its predecessor.
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  const auto hi = static_cast<std::size_t>(it - sorted.begin());
  const std::size_t lo = hi - 1;
  return (v - sorted[lo] <= sorted[hi] - v) ? lo : hi;
}

LabelGrid2D::LabelGrid2D(std::vector<double> pitch, std::vector<double> yaw)
    : pitch_(std::move(pitch)), yaw_(std::move(yaw)) {
  require(pitch_.size() >= 2 && yaw_.size() >= 2, "label grid must be at least 2x2");
  require_increasing(pitch_, "pitch axis");
  require_increasing(yaw_, "yaw axis");
}

LabelGrid2D LabelGrid2D::from_ranges(const LabelSet1D& pitch, const LabelSet1D& yaw) {
  return LabelGrid2D({pitch.values().begin(), pitch.values().end()},
                     {yaw.values().begin(), yaw.values().end()});
}

bool is_distribution(std::span<const double> mass) {
  if (mass.empty()) return false;
  double sum = 0.0;
  for (double m : mass) {
    if (!(m >= 0.0) || !std::isfinite(m)) return false;
    sum += m;
  }
  return std::abs(sum - 1.0) <= kNormTolerance;
}

LabelDistribution::LabelDistribution(std::vector<double> mass) : mass_(std::move(mass)) {
  require(is_distribution(mass_),
          "label distribution must be nonnegative and sum to 1");
}

LabelDistribution LabelDistribution::uniform(std::size_t n) {
  require(n >= 1, "uniform distribution needs at least one label");
  return LabelDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double LabelDistribution::entropy() const {
  double h = 0.0;
  for (double m : mass_) {
    if (m > 0.0) h -= m * std::log(m);
  }
  return h;
}

std::size_t LabelDistribution::argmax() const {
  return static_cast<std::size_t>(std::max_element(mass_.begin(), mass_.end()) -
                                  mass_.begin());
}

JointLabelDistribution::JointLabelDistribution(std::size_t rows, std::size_t cols,
                                               std::vector<double> mass)
    : rows_(rows), cols_(cols), mass_(std::move(mass)) {
  require(rows_ * cols_ == mass_.size() && rows_ > 0 && cols_ > 0,
          "joint distribution shape does not match its mass");
  require(is_distribution(mass_),
          "joint distribution must be nonnegative and sum to 1");
}

SpatialLabelField::SpatialLabelField(std::size_t height, std::size_t width,
                                     std::size_t classes, std::vector<double> mass)
    : height_(height), width_(width), classes_(classes), mass_(std::move(mass)) {
  require(height_ > 0 && width_ > 0 && classes_ >= 2,
          "label field needs a nonempty image and at least 2 classes");
  require(mass_.size() == height_ * width_ * classes_,
          "label field mass does not match its shape");
  for (std::size_t p = 0; p < height_ * width_; ++p) {
    require(is_distribution(std::span<const double>(mass_).subspan(p * classes_, classes_)),
            "label field pixel " + std::to_string(p) + " is not a distribution");
  }
}

SpatialLabelField SpatialLabelField::from_labels(std::size_t height, std::size_t width,
                                                 std::size_t classes,
                                                 std::span<const int> labels) {
  require(labels.size() == height * width, "label map does not match its shape");
  std::vector<double> mass(height * width * classes, 0.0);
  for (std::size_t p = 0; p < labels.size(); ++p) {
    require(labels[p] >= 0 && static_cast<std::size_t>(labels[p]) < classes,
            "label map entry " + std::to_string(p) + " out of range");
    mass[p * classes + static_cast<std::size_t>(labels[p])] = 1.0;
  }
  return SpatialLabelField(height, width, classes, std::move(mass));
}

}  // namespace dldl

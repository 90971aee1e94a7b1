#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dldl {

inline constexpr double kNormTolerance = 1e-9;

/// Ordered, uniformly quantized label values {min, min+step, ..., max}.
class LabelSet1D {
 public:
  /// Throws InputError unless min < max, step > 0 and (max - min) is an
  /// integer multiple of step within 1e-9.
  static LabelSet1D make_range(double min, double max, double step);

  std::span<const double> values() const { return values_; }
  double value(std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  double step() const { return step_; }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

  // argmin_i |values[i] - v|, ties to the lower index, clamped to the ends.
  std::size_t nearest_index(double v) const;

  bool operator==(const LabelSet1D&) const = default;

 private:
  LabelSet1D(std::vector<double> values, double step)
      : values_(std::move(values)), step_(step) {}

  std::vector<double> values_;
  double step_ = 0.0;
};

// Nearest index on any strictly increasing axis, same tie and clamp rules.
std::size_t nearest_index(std::span<const double> sorted, double v);

/// Pitch x yaw grid of (possibly non-uniform) strictly increasing axes.
class LabelGrid2D {
 public:
  LabelGrid2D(std::vector<double> pitch, std::vector<double> yaw);
  static LabelGrid2D from_ranges(const LabelSet1D& pitch, const LabelSet1D& yaw);

  std::span<const double> pitch() const { return pitch_; }
  std::span<const double> yaw() const { return yaw_; }
  std::size_t rows() const { return pitch_.size(); }
  std::size_t cols() const { return yaw_.size(); }
  std::size_t size() const { return rows() * cols(); }

  bool operator==(const LabelGrid2D&) const = default;

 private:
  std::vector<double> pitch_;
  std::vector<double> yaw_;
};

/// Probability mass over a label set, stored in label order.
class LabelDistribution {
 public:
  // Validates nonnegativity and |sum - 1| <= 1e-9.
  explicit LabelDistribution(std::vector<double> mass);

  static LabelDistribution uniform(std::size_t n);

  std::span<const double> mass() const { return mass_; }
  double operator[](std::size_t i) const { return mass_[i]; }
  std::size_t size() const { return mass_.size(); }

  double entropy() const;
  std::size_t argmax() const;  // ties to the lower index

 private:
  std::vector<double> mass_;
};

/// Row-major joint mass, pitch along rows.
class JointLabelDistribution {
 public:
  JointLabelDistribution(std::size_t rows, std::size_t cols, std::vector<double> mass);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t r, std::size_t c) const { return mass_[r * cols_ + c]; }
  std::span<const double> mass() const { return mass_; }

  LabelDistribution flatten() const { return LabelDistribution(mass_); }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> mass_;
};

/// Per-pixel distributions over classes 0..C (0 = background).
/// Layout: pixel-major, classes contiguous: mass[(i * width + j) * classes + k].
class SpatialLabelField {
 public:
  SpatialLabelField(std::size_t height, std::size_t width, std::size_t classes,
                    std::vector<double> mass);

  // One-hot field from an integer label map.
  static SpatialLabelField from_labels(std::size_t height, std::size_t width,
                                       std::size_t classes,
                                       std::span<const int> labels);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t classes() const { return classes_; }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return mass_[(i * width_ + j) * classes_ + k];
  }
  std::span<const double> pixel(std::size_t i, std::size_t j) const {
    return std::span<const double>(mass_).subspan((i * width_ + j) * classes_, classes_);
  }
  std::span<const double> mass() const { return mass_; }

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t classes_;
  std::vector<double> mass_;
};

// True when every entry is >= 0 and the sum is within 1e-9 of 1.
bool is_distribution(std::span<const double> mass);

}  // namespace dldl

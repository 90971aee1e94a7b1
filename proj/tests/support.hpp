#pragma once

// Hand-rolled generators for property tests. Every generator draws from a
// caller-owned Rng so a failing case can be replayed from its seed.

#include <cmath>
#include <cstddef>
#include <vector>

#include "dldl/construct.hpp"
#include "dldl/label_space.hpp"
#include "dldl/rng.hpp"

namespace dldl::testing {

// Calls body(rng, case_index) `cases` times with per-case seeds.
template <class Body>
void for_all(std::uint64_t seed, std::size_t cases, Body&& body) {
  for (std::size_t c = 0; c < cases; ++c) {
    Rng rng(Rng::derive(seed, c));
    body(rng, c);
  }
}

inline std::vector<double> random_distribution(Rng& rng, std::size_t n, double zero_prob = 0.2) {
  std::vector<double> y(n, 0.0);
  double total = 0.0;
  for (double& v : y) {
    v = rng.uniform() < zero_prob ? 0.0 : rng.uniform(0.01, 1.0);
    total += v;
  }
  if (total == 0.0) {
    y[rng.index(n)] = 1.0;
    return y;
  }
  for (double& v : y) v /= total;
  return y;
}

inline std::vector<double> random_logits(Rng& rng, std::size_t n, double scale) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform(-scale, scale);
  return x;
}

inline LabelSet1D random_label_set(Rng& rng) {
  const double steps[] = {0.5, 1.0, 2.0, 3.0, 5.0};
  const double step = steps[rng.index(5)];
  const double min = std::round(rng.uniform(-50.0, 50.0));
  const std::size_t n = 2 + rng.index(60);
  return LabelSet1D::make_range(min, min + step * static_cast<double>(n - 1), step);
}

inline std::vector<double> random_axis(Rng& rng, std::size_t n) {
  std::vector<double> axis(n);
  double v = rng.uniform(-90.0, -30.0);
  for (double& a : axis) {
    a = v;
    v += rng.uniform(3.0, 20.0);
  }
  return axis;
}

inline LabelGrid2D random_grid(Rng& rng) {
  return LabelGrid2D(random_axis(rng, 2 + rng.index(10)), random_axis(rng, 2 + rng.index(12)));
}

inline MultiLabelLevels random_levels(Rng& rng, std::size_t classes) {
  std::vector<LabelLevel> levels(classes);
  for (auto& l : levels) {
    const double u = rng.uniform();
    l = u < 0.2 ? LabelLevel::kPositive : (u < 0.35 ? LabelLevel::kDifficult : LabelLevel::kNegative);
  }
  levels[rng.index(classes)] = LabelLevel::kPositive;
  return MultiLabelLevels(levels);
}

inline std::vector<int> random_map(Rng& rng, std::size_t n, std::size_t classes) {
  std::vector<int> map(n);
  for (int& v : map) v = static_cast<int>(rng.index(classes));
  return map;
}

inline double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

inline bool valid_distribution(std::span<const double> v) {
  for (double x : v) {
    if (!(x >= 0.0)) return false;
  }
  return std::abs(sum(v) - 1.0) <= 1e-9;
}

}  // namespace dldl::testing

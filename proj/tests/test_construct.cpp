#include <doctest.h>

#include <cmath>

#include "dldl/construct.hpp"
#include "dldl/error.hpp"
#include "support.hpp"

using namespace dldl;

namespace {

// Unnormalized normal density; the normalizing constant cancels.
double bump(double x, double mu, double sigma) {
  return std::exp(-(x - mu) * (x - mu) / (2.0 * sigma * sigma));
}

// Zero-padded correlation of each class plane, then per-pixel normalization.
std::vector<double> brute_smooth(const std::vector<int>& labels, std::size_t h, std::size_t w,
                                 std::size_t classes, const SmoothingKernel& k) {
  const long half = static_cast<long>(k.size / 2);
  std::vector<double> out(h * w * classes, 0.0);
  for (long i = 0; i < static_cast<long>(h); ++i) {
    for (long j = 0; j < static_cast<long>(w); ++j) {
      for (long di = -half; di <= half; ++di) {
        for (long dj = -half; dj <= half; ++dj) {
          const long y = i + di, x = j + dj;
          if (y < 0 || x < 0 || y >= static_cast<long>(h) || x >= static_cast<long>(w)) continue;
          const int c = labels[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)];
          out[(static_cast<std::size_t>(i) * w + static_cast<std::size_t>(j)) * classes +
              static_cast<std::size_t>(c)] +=
              k.at(static_cast<std::size_t>(di + half), static_cast<std::size_t>(dj + half));
        }
      }
      double total = 0.0;
      for (std::size_t c = 0; c < classes; ++c) {
        total += out[(static_cast<std::size_t>(i) * w + static_cast<std::size_t>(j)) * classes + c];
      }
      for (std::size_t c = 0; c < classes; ++c) {
        out[(static_cast<std::size_t>(i) * w + static_cast<std::size_t>(j)) * classes + c] /= total;
      }
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("construct") {

TEST_CASE("gaussian_1d on three labels") {
  const auto set = LabelSet1D::make_range(1, 3, 1);
  const auto y = gaussian_1d(set, 2.0, 1.0);
  const double z = bump(1, 2, 1) + bump(2, 2, 1) + bump(3, 2, 1);
  CHECK(y[0] == doctest::Approx(bump(1, 2, 1) / z).epsilon(1e-14));
  CHECK(y[1] == doctest::Approx(bump(2, 2, 1) / z).epsilon(1e-14));
  CHECK(std::abs(y[0] - 0.2741) <= 1e-4);
  CHECK(std::abs(y[1] - 0.4519) <= 1e-4);
  CHECK(std::abs(y[2] - 0.2741) <= 1e-4);
}

TEST_CASE("gaussian_1d over ages") {
  const auto ages = LabelSet1D::make_range(1, 85, 1);
  const auto y = gaussian_1d(ages, 25.0, 2.0);
  CHECK(ages.value(y.argmax()) == 25.0);
  CHECK(y[23] == doctest::Approx(y[25]).epsilon(1e-15));
  CHECK(testing::valid_distribution(y.mass()));

  const auto delta = gaussian_1d(ages, 25.0, 0.0);
  CHECK(delta[24] == 1.0);
  CHECK(testing::sum(delta.mass()) == 1.0);
  CHECK(ages.value(gaussian_1d(ages, 25.4, 0.0).argmax()) == 25.0);

  CHECK_THROWS_AS(gaussian_1d(ages, 25.0, -1.0), InputError);
}

TEST_CASE("gaussian_2d symmetry and mode") {
  const LabelGrid2D small({-15, 0, 15}, {-15, 0, 15});
  const auto y = gaussian_2d(small, {0.0, 0.0}, 15.0);
  CHECK(y.at(1, 1) > y.at(0, 1));
  CHECK(y.at(1, 1) > y.at(0, 0));
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(y.at(r, c) == doctest::Approx(y.at(c, r)).epsilon(1e-15));
      CHECK(y.at(r, c) == doctest::Approx(y.at(2 - r, c)).epsilon(1e-15));
      CHECK(y.at(r, c) == doctest::Approx(y.at(r, 2 - c)).epsilon(1e-15));
    }
  }

  const LabelGrid2D p04({-90, -60, -30, -15, 0, 15, 30, 60, 90},
                        {-90, -75, -60, -45, -30, -15, 0, 15, 30, 45, 60, 75, 90});
  const auto joint = gaussian_2d(p04, {0.0, 60.0}, 15.0);
  const auto mode = joint.flatten().argmax();
  CHECK(p04.pitch()[mode / p04.cols()] == 0.0);
  CHECK(p04.yaw()[mode % p04.cols()] == 60.0);

  CHECK_THROWS_AS(gaussian_2d(small, {0.0, 0.0}, 0.0), InputError);
  CHECK_THROWS_AS(gaussian_2d(small, {0.0, 0.0}, -2.0), InputError);
}

TEST_CASE("gaussian_2d equals the renormalized outer product of its marginals") {
  testing::for_all(5, 100, [](Rng& rng, std::size_t) {
    const auto grid = testing::random_grid(rng);
    const double mp = grid.pitch()[rng.index(grid.rows())];
    const double my = grid.yaw()[rng.index(grid.cols())];
    const double sigma = rng.uniform(2.0, 30.0);
    const auto y = gaussian_2d(grid, {mp, my}, sigma);
    std::vector<double> outer(grid.size());
    double total = 0.0;
    for (std::size_t r = 0; r < grid.rows(); ++r) {
      for (std::size_t c = 0; c < grid.cols(); ++c) {
        outer[r * grid.cols() + c] = bump(grid.pitch()[r], mp, sigma) * bump(grid.yaw()[c], my, sigma);
        total += outer[r * grid.cols() + c];
      }
    }
    for (std::size_t k = 0; k < outer.size(); ++k) {
      REQUIRE(std::abs(y.mass()[k] - outer[k] / total) <= 1e-12);
    }
  });
}

TEST_CASE("multilabel weights") {
  std::vector<LabelLevel> levels(20, LabelLevel::kNegative);
  levels[1] = LabelLevel::kPositive;
  levels[2] = LabelLevel::kDifficult;
  MultiLabelWeights w;
  w.epsilon = 0.0;
  const auto y = multilabel(MultiLabelLevels(levels), w);
  CHECK(y[1] == doctest::Approx(1.0 / 1.3).epsilon(1e-14));
  CHECK(y[2] == doctest::Approx(0.3 / 1.3).epsilon(1e-14));
  CHECK(y[0] == 0.0);
  CHECK(std::abs(y[1] - 0.7692) <= 1e-4);
  CHECK(std::abs(y[2] - 0.2308) <= 1e-4);

  const auto ye = multilabel(MultiLabelLevels(levels), MultiLabelWeights{});
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(ye[k] == doctest::Approx((y[k] + 0.0005) / 1.01).epsilon(1e-14));
  }
  CHECK(testing::valid_distribution(ye.mass()));

  std::vector<LabelLevel> single(5, LabelLevel::kNegative);
  single[3] = LabelLevel::kPositive;
  const auto one = multilabel(MultiLabelLevels(single), w);
  CHECK(one[3] == 1.0);
  CHECK(testing::sum(one.mass()) == 1.0);
}

TEST_CASE("multilabel rejects invalid inputs") {
  CHECK_THROWS_AS(MultiLabelLevels(std::vector<LabelLevel>(4, LabelLevel::kNegative)), InputError);
  CHECK_THROWS_AS(MultiLabelLevels({}), InputError);
  const MultiLabelLevels levels({LabelLevel::kPositive, LabelLevel::kDifficult});
  CHECK_THROWS_AS(multilabel(levels, {0.3, 1.0, 0.0, 0.01}), InputError);
  CHECK_THROWS_AS(multilabel(levels, {1.0, 0.3, 0.3, 0.01}), InputError);
  CHECK_THROWS_AS(multilabel(levels, {1.0, 0.3, -0.1, 0.01}), InputError);
  CHECK_THROWS_AS(multilabel(levels, {1.0, 0.3, 0.0, -0.01}), InputError);
}

TEST_CASE("one_hot snaps to the nearest label") {
  const auto ages = LabelSet1D::make_range(1, 85, 1);
  CHECK(one_hot(ages, 30)[29] == 1.0);
  CHECK(one_hot(ages, 30.4)[29] == 1.0);
  CHECK(testing::sum(one_hot(ages, 84.9).mass()) == 1.0);
  CHECK(one_hot_index(4, 2)[2] == 1.0);
  CHECK_THROWS_AS(one_hot_index(4, 4), InputError);
}

TEST_CASE("label_smoothing") {
  const auto hot = one_hot_index(10, 4);
  const auto same = label_smoothing(hot, 0.0);
  for (std::size_t k = 0; k < 10; ++k) CHECK(same[k] == hot[k]);

  const auto ls = label_smoothing(hot, 0.1);
  CHECK(ls[4] == doctest::Approx(0.91).epsilon(1e-14));
  CHECK(ls[0] == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(testing::valid_distribution(ls.mass()));

  const auto u = LabelDistribution::uniform(7);
  const auto lu = label_smoothing(u, 0.37);
  for (std::size_t k = 0; k < 7; ++k) CHECK(lu[k] == doctest::Approx(1.0 / 7).epsilon(1e-14));

  CHECK_THROWS_AS(label_smoothing(hot, -0.1), InputError);
  CHECK_THROWS_AS(label_smoothing(hot, 1.1), InputError);
}

TEST_CASE("gaussian_kernel") {
  const auto k1 = gaussian_kernel(1, 3.0);
  CHECK(k1.weights.size() == 1);
  CHECK(k1.weights[0] == 1.0);

  const auto k5 = gaussian_kernel(5, 1.0);
  CHECK(k5.padding == 2);
  CHECK(k5.stride == 1);
  CHECK(std::abs(testing::sum(k5.weights) - 1.0) <= 1e-12);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 5; ++c) {
      CHECK(k5.at(r, c) <= k5.at(2, 2));
      CHECK(k5.at(r, c) == doctest::Approx(k5.at(c, r)).epsilon(1e-15));
      CHECK(k5.at(r, c) == doctest::Approx(k5.at(4 - r, c)).epsilon(1e-15));
      CHECK(k5.at(r, c) == doctest::Approx(k5.at(r, 4 - c)).epsilon(1e-15));
    }
  }
  CHECK(gaussian_kernel(5).at(0, 0) == k5.at(0, 0));

  CHECK_THROWS_AS(gaussian_kernel(4, 1.0), InputError);
  CHECK_THROWS_AS(gaussian_kernel(0, 1.0), InputError);
  CHECK_THROWS_AS(gaussian_kernel(5, 0.0), InputError);
}

TEST_CASE("smoothing a constant field is the identity") {
  const std::vector<int> labels(36, 2);
  const auto field = SpatialLabelField::from_labels(6, 6, 3, labels);
  const auto out = smooth_segmentation(field, gaussian_kernel(5));
  for (std::size_t p = 0; p < field.mass().size(); ++p) {
    CHECK(out.mass()[p] == doctest::Approx(field.mass()[p]).epsilon(1e-15));
  }
}

TEST_CASE("smoothing a split field matches brute force") {
  std::vector<int> labels(64);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) labels[i * 8 + j] = j < 4 ? 0 : 1;
  }
  const auto kernel = gaussian_kernel(5, 1.0);
  const auto field = SpatialLabelField::from_labels(8, 8, 2, labels);
  const auto out = smooth_segmentation(field, kernel, Execution::kSerial);
  const auto oracle = brute_smooth(labels, 8, 8, 2, kernel);
  for (std::size_t p = 0; p < oracle.size(); ++p) {
    REQUIRE(std::abs(out.mass()[p] - oracle[p]) <= 1e-12);
  }
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j : {0, 1}) CHECK(out.at(i, j, 0) == 1.0);
    for (std::size_t j : {6, 7}) CHECK(out.at(i, j, 1) == 1.0);
    for (std::size_t j = 2; j <= 5; ++j) {
      CHECK(out.at(i, j, 0) > 0.0);
      CHECK(out.at(i, j, 1) > 0.0);
    }
  }
}

TEST_CASE("smoothing rejects kernels larger than the image") {
  const std::vector<int> labels(9, 0);
  const auto field = SpatialLabelField::from_labels(3, 3, 2, labels);
  CHECK_THROWS_AS(smooth_segmentation(field, gaussian_kernel(5)), InputError);
  auto strided = gaussian_kernel(3);
  strided.stride = 2;
  CHECK_THROWS_AS(smooth_segmentation(field, strided), InputError);
}

}

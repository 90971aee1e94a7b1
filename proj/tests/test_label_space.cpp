#include <doctest.h>

#include "dldl/error.hpp"
#include "dldl/label_space.hpp"
#include "support.hpp"

using namespace dldl;

TEST_SUITE("label_space") {

TEST_CASE("make_range builds inclusive quantized sets") {
  const auto ages = LabelSet1D::make_range(1, 85, 1);
  CHECK(ages.size() == 85);
  CHECK(ages.min() == 1.0);
  CHECK(ages.max() == 85.0);
  CHECK(ages.value(24) == 25.0);

  const auto pair = LabelSet1D::make_range(0, 1, 1);
  CHECK(pair.size() == 2);

  const auto pose = LabelSet1D::make_range(-90, 90, 3);
  CHECK(pose.size() == 61);
  CHECK(pose.value(30) == 0.0);
  for (std::size_t i = 0; i + 1 < pose.size(); ++i) {
    CHECK(pose.value(i + 1) - pose.value(i) == doctest::Approx(3.0).epsilon(1e-12));
  }
}

TEST_CASE("make_range rejects bad ranges") {
  CHECK_THROWS_AS(LabelSet1D::make_range(1, 85, 0), InputError);
  CHECK_THROWS_AS(LabelSet1D::make_range(1, 85, -1), InputError);
  CHECK_THROWS_AS(LabelSet1D::make_range(5, 5, 1), InputError);
  CHECK_THROWS_AS(LabelSet1D::make_range(5, 1, 1), InputError);
  CHECK_THROWS_AS(LabelSet1D::make_range(0, 10, 3), InputError);
}

TEST_CASE("nearest_index snaps, ties low and clamps") {
  const auto ages = LabelSet1D::make_range(1, 85, 1);
  CHECK(ages.value(ages.nearest_index(25.4)) == 25.0);
  CHECK(ages.value(ages.nearest_index(25.5)) == 25.0);
  CHECK(ages.value(ages.nearest_index(25.6)) == 26.0);
  CHECK(ages.value(ages.nearest_index(200)) == 85.0);
  CHECK(ages.value(ages.nearest_index(-7)) == 1.0);

  const std::vector<double> axis = {-90, -60, -30, -15, 0};
  CHECK(nearest_index(axis, -45) == 1);  // tie between -60 and -30
  CHECK(nearest_index(axis, -22.4) == 3);
  CHECK(nearest_index(axis, -22.6) == 2);
}

TEST_CASE("nearest_index round-trips every label") {
  testing::for_all(11, 200, [](Rng& rng, std::size_t) {
    const auto set = testing::random_label_set(rng);
    for (std::size_t i = 0; i < set.size(); ++i) REQUIRE(set.nearest_index(set.value(i)) == i);
  });
}

TEST_CASE("grid validation") {
  CHECK_NOTHROW(LabelGrid2D({-15, 0, 15}, {-15, 0, 15}));
  CHECK_THROWS_AS(LabelGrid2D({0}, {0, 1}), InputError);
  CHECK_THROWS_AS(LabelGrid2D({0, 1}, {1, 1}), InputError);
  CHECK_THROWS_AS(LabelGrid2D({1, 0}, {0, 1}), InputError);
  const auto g = LabelGrid2D::from_ranges(LabelSet1D::make_range(-90, 90, 3),
                                          LabelSet1D::make_range(-90, 90, 3));
  CHECK(g.size() == 61 * 61);
}

TEST_CASE("distribution containers validate mass") {
  CHECK_NOTHROW(LabelDistribution({0.25, 0.75}));
  CHECK_NOTHROW(LabelDistribution({0.5, 0.5 + 5e-10}));
  CHECK_THROWS_AS(LabelDistribution({0.5, 0.6}), InputError);
  CHECK_THROWS_AS(LabelDistribution({1.5, -0.5}), InputError);
  CHECK_THROWS_AS(LabelDistribution({}), InputError);

  const auto u = LabelDistribution::uniform(4);
  CHECK(u.argmax() == 0);
  CHECK(u.entropy() == doctest::Approx(std::log(4.0)).epsilon(1e-12));

  CHECK_THROWS_AS(JointLabelDistribution(2, 2, {0.5, 0.5, 0.5, 0.5}), InputError);
  const JointLabelDistribution j(2, 3, {0.1, 0.2, 0.1, 0.3, 0.2, 0.1});
  CHECK(j.at(1, 0) == 0.3);
  CHECK(j.flatten().size() == 6);

  const std::vector<int> labels = {0, 1, 2, 1};
  const auto field = SpatialLabelField::from_labels(2, 2, 3, labels);
  CHECK(field.at(0, 1, 1) == 1.0);
  CHECK(field.at(1, 0, 2) == 1.0);
  CHECK(field.at(1, 0, 0) == 0.0);
  const std::vector<int> bad = {0, 3, 0, 0};
  CHECK_THROWS_AS(SpatialLabelField::from_labels(2, 2, 3, bad), InputError);
}

}

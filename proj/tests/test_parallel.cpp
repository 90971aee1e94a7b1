#include <doctest.h>

#include <numeric>

#include "dldl/construct.hpp"
#include "dldl/kernels.hpp"
#include "dldl/metrics.hpp"
#include "dldl/net.hpp"
#include "support.hpp"

using namespace dldl;

namespace {

Dataset random_dataset(Rng& rng, std::size_t n, std::size_t dim, std::size_t classes) {
  Dataset d;
  d.dim = dim;
  for (std::size_t i = 0; i < n * dim; ++i) d.features.push_back(rng.uniform(-1.0, 1.0));
  for (std::size_t i = 0; i < n; ++i) d.targets.push_back(testing::random_distribution(rng, classes));
  return d;
}

bool same_grads(const Gradients& a, const Gradients& b) {
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    if (a.layers[l].weights != b.layers[l].weights || a.layers[l].biases != b.layers[l].biases) {
      return false;
    }
  }
  return a.layers.size() == b.layers.size();
}

}  // namespace

TEST_SUITE("parallel") {

TEST_CASE("batch_gradient matches the serial reference bit for bit") {
  testing::for_all(31, 10, [](Rng& rng, std::size_t) {
    const std::size_t classes = 2 + rng.index(12);
    const auto data = random_dataset(rng, 40 + rng.index(100), 6, classes);
    const auto net = init_gaussian({{6, 17, 9, classes}, Head::kDistribution}, rng.word(), 0.3);
    std::vector<std::size_t> batch(data.size());
    std::iota(batch.begin(), batch.end(), 0);
    rng.shuffle(std::span<std::size_t>(batch));
    batch.resize(1 + rng.index(batch.size()));

    const SampleObjective objective = [&](std::size_t i, std::span<const double> out,
                                          std::span<double> g) {
      return sample_objective(LossKind::kKl, 0.0, data.targets[i], out, g);
    };
    BatchWorkspace ws(net, batch.size());
    Gradients serial = Gradients::zeros_like(net);
    Gradients parallel = Gradients::zeros_like(net);
    const double ls = batch_gradient(net, data, batch, objective, serial, ws, Execution::kSerial);
    const double lp = batch_gradient(net, data, batch, objective, parallel, ws, Execution::kParallel);
    REQUIRE(ls == lp);
    REQUIRE(same_grads(serial, parallel));
  });
}

TEST_CASE("predict_batch") {
  Rng rng(5);
  const auto data = random_dataset(rng, 257, 4, 3);
  const auto net = init_gaussian({{4, 12, 3}, Head::kDistribution}, 2, 0.4);
  const auto s = predict_batch(net, data, Execution::kSerial);
  CHECK(s == predict_batch(net, data, Execution::kParallel));
  REQUIRE(s.size() == 257 * 3);
  const auto first = forward(net, data.row(0));
  CHECK(std::vector<double>(s.begin(), s.begin() + 3) == first);
}

TEST_CASE("smooth_segmentation") {
  testing::for_all(32, 10, [](Rng& rng, std::size_t) {
    const std::size_t h = 3 + rng.index(30), w = 3 + rng.index(30), k = 2 + rng.index(6);
    const auto field = SpatialLabelField::from_labels(h, w, k, testing::random_map(rng, h * w, k));
    const auto kernel = gaussian_kernel(rng.index(2) ? 5 : 3, rng.uniform(0.5, 2.0));
    const auto s = smooth_segmentation(field, kernel, Execution::kSerial);
    const auto p = smooth_segmentation(field, kernel, Execution::kParallel);
    REQUIRE(std::vector<double>(s.mass().begin(), s.mass().end()) ==
            std::vector<double>(p.mass().begin(), p.mass().end()));
  });
}

TEST_CASE("confusion matrix and mean IU") {
  testing::for_all(33, 10, [](Rng& rng, std::size_t) {
    const std::size_t n = 1 + rng.index(5000), k = 2 + rng.index(20);
    const auto pred = testing::random_map(rng, n, k);
    const auto truth = testing::random_map(rng, n, k);
    REQUIRE(confusion_matrix(pred, truth, k, Execution::kSerial) ==
            confusion_matrix(pred, truth, k, Execution::kParallel));
    REQUIRE(mean_iu(pred, truth, k, Execution::kSerial) ==
            mean_iu(pred, truth, k, Execution::kParallel));
  });
}

TEST_CASE("train") {
  Rng rng(6);
  const auto data = random_dataset(rng, 150, 5, 4);
  TrainConfig c;
  c.epochs = 4;
  c.batch_size = 32;
  c.init_std = 0.1;
  c.seed = 3;
  const Architecture arch{{5, 16, 4}, Head::kDistribution};
  const auto s = train(data, arch, c, {}, Execution::kSerial);
  const auto p = train(data, arch, c, {}, Execution::kParallel);
  for (std::size_t l = 0; l < s.net.layers.size(); ++l) {
    CHECK(s.net.layers[l].weights == p.net.layers[l].weights);
    CHECK(s.net.layers[l].biases == p.net.layers[l].biases);
  }
  for (std::size_t e = 0; e < 4; ++e) {
    CHECK(s.history.epochs[e].train_loss == p.history.epochs[e].train_loss);
  }
}

}

#include "dldl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dldl/error.hpp"

namespace dldl {

namespace {

constexpr double kPoseMatchTolerance = 1e-9;

void require_batch(std::size_t a, std::size_t b) {
  require(a == b, "prediction and ground-truth batch sizes differ");
  require(a > 0, "empty batch");
}

std::size_t argmax(std::span<const double> v) {
  require(!v.empty(), "empty distribution");
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::string to_string(Decoder d) { return d == Decoder::kMax ? "Max" : "Exp"; }

double decode_max(std::span<const double> yhat, const LabelSet1D& set) {
  require(yhat.size() == set.size(), "distribution length does not match the label set");
  return set.value(argmax(yhat));
}

double decode_expectation(std::span<const double> yhat, const LabelSet1D& set) {
  require(yhat.size() == set.size(), "distribution length does not match the label set");
  double e = 0.0;
  for (std::size_t i = 0; i < yhat.size(); ++i) e += yhat[i] * set.value(i);
  return e;
}

double decode(Decoder d, std::span<const double> yhat, const LabelSet1D& set) {
  return d == Decoder::kMax ? decode_max(yhat, set) : decode_expectation(yhat, set);
}

std::vector<std::size_t> decode_threshold(std::span<const double> yhat, double xi) {
  require(xi >= 0.0 && xi <= 1.0, "threshold must be in [0, 1]");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < yhat.size(); ++i) {
    if (yhat[i] > xi) out.push_back(i);
  }
  return out;
}

std::vector<double> decode_threshold(std::span<const double> yhat, const LabelSet1D& set,
                                     double xi) {
  require(yhat.size() == set.size(), "distribution length does not match the label set");
  std::vector<double> out;
  for (std::size_t i : decode_threshold(yhat, xi)) out.push_back(set.value(i));
  return out;
}

PosePair decode_joint_max(std::span<const double> yhat, const LabelGrid2D& grid) {
  require(yhat.size() == grid.size(), "joint distribution does not match the grid");
  const std::size_t cell = argmax(yhat);
  return {grid.pitch()[cell / grid.cols()], grid.yaw()[cell % grid.cols()]};
}

PosePair decode_joint_expectation(std::span<const double> yhat, const LabelGrid2D& grid) {
  require(yhat.size() == grid.size(), "joint distribution does not match the grid");
  double pitch = 0.0;
  double yaw = 0.0;
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      const double m = yhat[r * grid.cols() + c];
      pitch += m * grid.pitch()[r];
      yaw += m * grid.yaw()[c];
    }
  }
  return {pitch, yaw};
}

PosePair decode_joint(Decoder d, std::span<const double> yhat, const LabelGrid2D& grid) {
  return d == Decoder::kMax ? decode_joint_max(yhat, grid) : decode_joint_expectation(yhat, grid);
}

double mae(std::span<const double> preds, std::span<const double> truths) {
  require_batch(preds.size(), truths.size());
  double sum = 0.0;
  for (std::size_t n = 0; n < preds.size(); ++n) sum += std::abs(preds[n] - truths[n]);
  return sum / static_cast<double>(preds.size());
}

double cs(std::span<const double> preds, std::span<const double> truths, double g) {
  require_batch(preds.size(), truths.size());
  require(g >= 0.0, "CS threshold must be nonnegative");
  std::size_t hits = 0;
  for (std::size_t n = 0; n < preds.size(); ++n) {
    if (std::abs(preds[n] - truths[n]) <= g) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(preds.size());
}

std::vector<double> cs_curve(std::span<const double> preds, std::span<const double> truths,
                             int max_g) {
  require(max_g >= 1, "CS curve needs max_g >= 1");
  std::vector<double> curve;
  for (int g = 1; g <= max_g; ++g) curve.push_back(cs(preds, truths, g));
  return curve;
}

double eps_error(std::span<const double> preds, std::span<const double> truths,
                 std::span<const double> sigmas) {
  require_batch(preds.size(), truths.size());
  require(sigmas.size() == preds.size(), "one sigma per sample required");
  double sum = 0.0;
  for (std::size_t n = 0; n < preds.size(); ++n) {
    require(sigmas[n] > 0.0, "epsilon-error needs sigma > 0");
    const double d = preds[n] - truths[n];
    sum += 1.0 - std::exp(-(d * d) / (2.0 * sigmas[n] * sigmas[n]));
  }
  return sum / static_cast<double>(preds.size());
}

PoseScores pose_mae(std::span<const PosePair> preds, std::span<const PosePair> truths) {
  require_batch(preds.size(), truths.size());
  PoseScores s;
  for (std::size_t n = 0; n < preds.size(); ++n) {
    const double dp = preds[n].first - truths[n].first;
    const double dy = preds[n].second - truths[n].second;
    s.pitch += std::abs(dp);
    s.yaw += std::abs(dy);
    s.joint += std::hypot(dp, dy);
  }
  const auto count = static_cast<double>(preds.size());
  return {s.pitch / count, s.yaw / count, s.joint / count};
}

PoseScores pose_acc(std::span<const PosePair> preds, std::span<const PosePair> truths) {
  require_batch(preds.size(), truths.size());
  std::size_t pitch = 0, yaw = 0, joint = 0;
  for (std::size_t n = 0; n < preds.size(); ++n) {
    const bool p = std::abs(preds[n].first - truths[n].first) <= kPoseMatchTolerance;
    const bool y = std::abs(preds[n].second - truths[n].second) <= kPoseMatchTolerance;
    pitch += p;
    yaw += y;
    joint += p && y;
  }
  const double scale = 100.0 / static_cast<double>(preds.size());
  return {scale * static_cast<double>(pitch), scale * static_cast<double>(yaw),
          scale * static_cast<double>(joint)};
}

double average_precision(std::span<const double> scores,
                         std::span<const std::uint8_t> positives) {
  require_batch(scores.size(), positives.size());
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (positives[order[rank]]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  require(hits > 0, "average precision needs at least one positive");
  return sum / static_cast<double>(hits);
}

double mean_ap(std::span<const double> scores, std::span<const std::uint8_t> positives,
               std::size_t classes) {
  require(classes > 0 && scores.size() % classes == 0, "score matrix shape mismatch");
  require(positives.size() == scores.size(), "label matrix shape mismatch");
  const std::size_t n = scores.size() / classes;
  std::vector<double> col(n);
  std::vector<std::uint8_t> pos(n);
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = scores[i * classes + c];
      pos[i] = positives[i * classes + c];
      any = any || pos[i];
    }
    if (!any) continue;
    sum += average_precision(col, pos);
    ++used;
  }
  require(used > 0, "mean AP needs at least one class with a positive");
  return sum / static_cast<double>(used);
}

std::vector<std::uint64_t> confusion_matrix(std::span<const int> pred, std::span<const int> truth,
                                            std::size_t classes, Execution exec) {
  require_batch(pred.size(), truth.size());
  const auto limit = static_cast<int>(classes);
  for (std::size_t p = 0; p < pred.size(); ++p) {
    require(pred[p] >= 0 && pred[p] < limit && truth[p] >= 0 && truth[p] < limit,
            "segmentation label out of range");
  }
  std::vector<std::uint64_t> counts(classes * classes, 0);
  const auto n = static_cast<std::ptrdiff_t>(pred.size());
  if (exec == Execution::kSerial) {
    for (std::ptrdiff_t p = 0; p < n; ++p) {
      ++counts[static_cast<std::size_t>(truth[p]) * classes + static_cast<std::size_t>(pred[p])];
    }
  } else {
    std::uint64_t* c = counts.data();
    const std::size_t cells = counts.size();
    // Integer counts: the reduction is exact in any order.
#pragma omp parallel for reduction(+ : c[:cells]) schedule(static)
    for (std::ptrdiff_t p = 0; p < n; ++p) {
      ++c[static_cast<std::size_t>(truth[p]) * classes + static_cast<std::size_t>(pred[p])];
    }
  }
  return counts;
}

double mean_iu(std::span<const int> pred, std::span<const int> truth, std::size_t classes,
               Execution exec) {
  const auto counts = confusion_matrix(pred, truth, classes, exec);
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t k = 0; k < classes; ++k) {
    std::uint64_t row = 0, colsum = 0;
    for (std::size_t j = 0; j < classes; ++j) {
      row += counts[k * classes + j];
      colsum += counts[j * classes + k];
    }
    const std::uint64_t tp = counts[k * classes + k];
    const std::uint64_t uni = row + colsum - tp;
    if (uni == 0) continue;
    sum += static_cast<double>(tp) / static_cast<double>(uni);
    ++present;
  }
  return sum / static_cast<double>(present);
}

void MetricReport::set(const std::string& name, double value) {
  for (auto& [k, v] : metrics) {
    if (k == name) {
      v = value;
      return;
    }
  }
  metrics.emplace_back(name, value);
}

double MetricReport::get(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  throw InputError("metric '" + name + "' not in report");
}

}  // namespace dldl

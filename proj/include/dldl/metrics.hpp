#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dldl/execution.hpp"
#include "dldl/label_space.hpp"

namespace dldl {

// --- decoders ----------------------------------------------------------------

enum class Decoder { kMax, kExp };
std::string to_string(Decoder d);

// Label at argmax yhat (ties to the lower index).
double decode_max(std::span<const double> yhat, const LabelSet1D& set);
// sum_i yhat_i * l_i
double decode_expectation(std::span<const double> yhat, const LabelSet1D& set);
double decode(Decoder d, std::span<const double> yhat, const LabelSet1D& set);

// Indices i with yhat_i > xi, ascending.
std::vector<std::size_t> decode_threshold(std::span<const double> yhat, double xi);
// Label values l_i with yhat_i > xi.
std::vector<double> decode_threshold(std::span<const double> yhat, const LabelSet1D& set,
                                     double xi);

using PosePair = std::pair<double, double>;  // (pitch, yaw)

// `yhat` is the row-major joint mass over the grid.
PosePair decode_joint_max(std::span<const double> yhat, const LabelGrid2D& grid);
PosePair decode_joint_expectation(std::span<const double> yhat, const LabelGrid2D& grid);
PosePair decode_joint(Decoder d, std::span<const double> yhat, const LabelGrid2D& grid);

// --- scalar-label metrics ------------------------------------------------------

double mae(std::span<const double> preds, std::span<const double> truths);
// Percentage of samples with |pred - truth| <= g.
double cs(std::span<const double> preds, std::span<const double> truths, double g);
// CS at g = 1..max_g.
std::vector<double> cs_curve(std::span<const double> preds, std::span<const double> truths,
                             int max_g = 30);
// mean of 1 - exp(-(pred - truth)^2 / (2 sigma_n^2)); every sigma_n > 0.
double eps_error(std::span<const double> preds, std::span<const double> truths,
                 std::span<const double> sigmas);

// --- pose metrics --------------------------------------------------------------

struct PoseScores {
  double pitch = 0.0;
  double yaw = 0.0;
  double joint = 0.0;
};

// Joint MAE is the mean Euclidean distance between (pitch, yaw) pairs.
PoseScores pose_mae(std::span<const PosePair> preds, std::span<const PosePair> truths);
// Percent correct per angle; joint counts a sample only if both angles match.
PoseScores pose_acc(std::span<const PosePair> preds, std::span<const PosePair> truths);

// --- ranking metrics -----------------------------------------------------------

/// Non-interpolated average precision: the mean, over positives, of the
/// precision at each positive's rank. Ranking is by descending score with
/// ties ordered by lower index first. Requires at least one positive.
double average_precision(std::span<const double> scores, std::span<const std::uint8_t> positives);

/// Mean AP over classes. `scores` and `positives` are row-major n x classes;
/// classes without any positive sample are skipped (at least one must remain).
double mean_ap(std::span<const double> scores, std::span<const std::uint8_t> positives,
               std::size_t classes);

// --- segmentation --------------------------------------------------------------

// counts[truth * classes + pred]
std::vector<std::uint64_t> confusion_matrix(std::span<const int> pred, std::span<const int> truth,
                                            std::size_t classes,
                                            Execution exec = Execution::kParallel);

/// Mean IU over classes that occur in the truth or the prediction.
/// Labels are 0..C (0 = background), so `classes` = C + 1.
double mean_iu(std::span<const int> pred, std::span<const int> truth, std::size_t classes,
               Execution exec = Execution::kParallel);

// --- report --------------------------------------------------------------------

struct MetricReport {
  std::size_t count = 0;
  std::vector<std::pair<std::string, double>> metrics;

  void set(const std::string& name, double value);
  double get(const std::string& name) const;
};

}  // namespace dldl

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dldl/construct.hpp"
#include "dldl/label_space.hpp"
#include "dldl/metrics.hpp"
#include "dldl/net.hpp"

namespace dldl {

// --- synthetic tasks -----------------------------------------------------------

struct AgeTaskParams {
  std::size_t n_train = 1000;
  std::size_t n_val = 500;
  std::size_t dim = 8;
  double noise = 1.0;
  std::uint64_t seed = 0;
};

/// Apparent-age stand-in. Features x ~ U(-1, 1)^d; the clean age is
/// age_generating_function(x); the observed mean adds bounded noise
/// noise * sigma_n * U(-1, 1) and is clamped to [1, 85]; sigma_n ~ U(1, 4).
/// Samples [0, n_train) are the training split, the rest validation.
struct SynthAgeTask {
  LabelSet1D labels = LabelSet1D::make_range(1, 85, 1);
  std::size_t dim = 0;
  std::size_t n_train = 0;
  std::size_t n_val = 0;
  std::vector<double> features;
  std::vector<double> mu;
  std::vector<double> sigma;

  std::size_t size() const { return n_train + n_val; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features).subspan(i * dim, dim);
  }
};

double age_generating_function(std::span<const double> x);
SynthAgeTask gen_age(const AgeTaskParams& params);

struct PoseTaskParams {
  std::size_t n_train = 1000;
  std::size_t n_val = 500;
  std::size_t dim = 8;
  double noise = 0.1;
  std::uint64_t seed = 0;
};

// Pitch {-90,-60,-30,-15,0,15,30,60,90} x yaw {-90..90 step 15}.
LabelGrid2D pointing04_grid();

/// Head-pose stand-in: poses drawn uniformly over grid nodes; features are a
/// seeded nonlinear embedding of the pose plus Gaussian noise.
struct SynthPoseTask {
  LabelGrid2D grid = pointing04_grid();
  std::size_t dim = 0;
  std::size_t n_train = 0;
  std::size_t n_val = 0;
  std::vector<double> features;
  std::vector<PosePair> pose;

  std::size_t size() const { return n_train + n_val; }
};

SynthPoseTask gen_pose(const PoseTaskParams& params, const LabelGrid2D& grid);

/// Multi-label stand-in: 1-3 Positive and 0-2 Difficult classes per sample;
/// features are noisy level indicators (1, 0.5, 0 per class).
struct SynthMultiLabelTask {
  std::size_t classes = 0;
  std::size_t dim = 0;
  std::vector<double> features;
  std::vector<MultiLabelLevels> levels;

  std::size_t size() const { return levels.size(); }
};

SynthMultiLabelTask gen_multilabel(std::size_t n, std::size_t classes, std::uint64_t seed);

struct Rect {
  std::size_t top = 0, left = 0, height = 0, width = 0;
  int label = 0;
};

/// Segmentation stand-in: 1-3 rectangles of distinct classes 1..C painted in
/// order over background 0. Maps are row-major H x W.
struct SynthSegTask {
  std::size_t height = 0, width = 0, classes = 0;  // classes excludes background
  std::vector<std::vector<int>> maps;
  std::vector<std::vector<Rect>> rects;
};

SynthSegTask gen_seg(std::size_t n, std::size_t height, std::size_t width, std::size_t classes,
                     std::uint64_t seed);

// Fraction of pixels with a 4-neighbour of a different label.
double boundary_fraction(std::span<const int> map, std::size_t height, std::size_t width);

// FNV-1a over the task's raw bytes; pins generator output in fixtures.
std::uint64_t task_hash(const SynthAgeTask& task);

// --- experiments ---------------------------------------------------------------

enum class Method {
  kDldl,            // DLDL (KL) on Gaussian label distributions
  kCConvNet,        // softmax on one-hot targets
  kRConvNetL2,
  kRConvNetL1,
  kRConvNetEpsIns,
  kConvNetLs,       // KL on label-smoothed one-hot targets
  kConvNetLdAlpha,  // alpha-divergence on Gaussian label distributions
};

std::string method_name(Method m);
Method method_from_string(const std::string& key);
std::string method_key(Method m);
LossKind method_loss(Method m);
std::vector<Method> all_methods();

struct ExperimentConfig {
  TrainConfig train;
  std::vector<std::size_t> hidden = {64, 64};
  // Age label spread; a negative value uses each sample's own sigma_n.
  double sigma = -1.0;
  double pose_sigma = 15.0;
  double ls_epsilon = 0.1;
  // Decoder reported by sigma_sweep.
  Decoder sweep_decoder = Decoder::kExp;
  Execution exec = Execution::kParallel;
};

struct CurvePoint {
  int epoch = 0;
  double train_loss = 0.0;
  double train_mae = 0.0;
  double val_mae = 0.0;
};

struct ReportRow {
  std::string method;
  std::string loss;
  std::string decoder;  // "Max", "Exp" or "Reg"
  MetricReport metrics;
  std::vector<double> cs_curve;  // age task, g = 1..30
  std::vector<CurvePoint> history;
};

struct ExperimentReport {
  std::string task;
  std::vector<ReportRow> rows;

  const ReportRow& row(const std::string& method, const std::string& decoder) const;
};

ExperimentReport run_comparison(const SynthAgeTask& task, const std::vector<Method>& methods,
                                const ExperimentConfig& config);
ExperimentReport run_comparison(const SynthPoseTask& task, const std::vector<Method>& methods,
                                const ExperimentConfig& config);

// One entry of a comparison: train a single method, or score a trained
// network on both splits (rows carry no history).
TrainResult train_method(const SynthAgeTask& task, Method m, const ExperimentConfig& config);
TrainResult train_method(const SynthPoseTask& task, Method m, const ExperimentConfig& config);
std::vector<ReportRow> evaluate_method(const SynthAgeTask& task, Method m, const Network& net,
                                       const ExperimentConfig& config);
std::vector<ReportRow> evaluate_method(const SynthPoseTask& task, Method m, const Network& net,
                                       const ExperimentConfig& config);

struct SweepPoint {
  double sigma = 0.0;
  double val_mae = 0.0;
};

// One DLDL training per sigma, every training sample labelled with that sigma.
std::vector<SweepPoint> sigma_sweep(const SynthAgeTask& task, std::span<const double> sigmas,
                                    const ExperimentConfig& config);

// {0, 0.5 s, ..., 3 s}
std::vector<double> default_sweep_sigmas(double step);

}  // namespace dldl

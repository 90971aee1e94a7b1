#include "dldl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dldl/error.hpp"
#include "dldl/kernels.hpp"
#include "dldl/rng.hpp"

namespace dldl {

namespace {

constexpr double kAgeMin = 1.0;
constexpr double kAgeMax = 85.0;

Dataset make_dataset(std::span<const double> features, std::size_t dim, std::size_t first,
                     std::size_t count) {
  Dataset d;
  d.dim = dim;
  d.features.assign(features.begin() + static_cast<std::ptrdiff_t>(first * dim),
                    features.begin() + static_cast<std::ptrdiff_t>((first + count) * dim));
  d.targets.resize(count);
  return d;
}

bool is_regression(Method m) {
  return m == Method::kRConvNetL2 || m == Method::kRConvNetL1 || m == Method::kRConvNetEpsIns;
}

std::vector<std::string> decoder_names(Method m) {
  if (is_regression(m)) return {"Reg"};
  return {to_string(Decoder::kMax), to_string(Decoder::kExp)};
}

std::vector<double> row_of(const std::vector<double>& outputs, std::size_t width, std::size_t i) {
  return {outputs.begin() + static_cast<std::ptrdiff_t>(i * width),
          outputs.begin() + static_cast<std::ptrdiff_t>((i + 1) * width)};
}

void fnv_mix(std::uint64_t& h, const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
}

ReportRow make_row(Method m, const std::string& decoder) {
  ReportRow row;
  row.method = method_name(m);
  row.loss = m == Method::kCConvNet ? "softmax" : std::string(to_string(method_loss(m)));
  row.decoder = decoder;
  return row;
}

void attach_history(std::vector<ReportRow>& rows, std::size_t first_row,
                    const TrainHistory& history) {
  for (const auto& e : history.epochs) {
    for (std::size_t d = 0; d < e.val_mae.size(); ++d) {
      rows[first_row + d].history.push_back({e.epoch, e.train_loss, e.train_mae[d], e.val_mae[d]});
    }
  }
}

}  // namespace

// --- generators ----------------------------------------------------------------

double age_generating_function(std::span<const double> x) {
  require(x.size() >= 2, "age generator needs at least 2 feature dimensions");
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    s += sign * scale * x[i] * (1.0 + 0.25 * static_cast<double>(i % 3));
  }
  s += 0.3 * std::sin(std::numbers::pi * x[0]) * x[1];
  return 43.0 + 42.0 * std::tanh(1.5 * s);
}

SynthAgeTask gen_age(const AgeTaskParams& params) {
  require(params.n_train >= 1, "age task needs at least one training sample");
  require(params.dim >= 2, "age task needs dim >= 2");
  require(params.noise >= 0.0, "noise must be nonnegative");
  SynthAgeTask task;
  task.dim = params.dim;
  task.n_train = params.n_train;
  task.n_val = params.n_val;
  const std::size_t n = task.size();
  Rng rng(params.seed);
  task.features.resize(n * params.dim);
  task.mu.resize(n);
  task.sigma.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < params.dim; ++k) {
      task.features[i * params.dim + k] = rng.uniform(-1.0, 1.0);
    }
    task.sigma[i] = rng.uniform(1.0, 4.0);
    const double jitter = params.noise * task.sigma[i] * rng.uniform(-1.0, 1.0);
    task.mu[i] = std::clamp(age_generating_function(task.row(i)) + jitter, kAgeMin, kAgeMax);
  }
  return task;
}

LabelGrid2D pointing04_grid() {
  std::vector<double> yaw;
  for (int v = -90; v <= 90; v += 15) yaw.push_back(v);
  return LabelGrid2D({-90, -60, -30, -15, 0, 15, 30, 60, 90}, std::move(yaw));
}

SynthPoseTask gen_pose(const PoseTaskParams& params, const LabelGrid2D& grid) {
  require(params.n_train >= 1, "pose task needs at least one training sample");
  require(params.dim >= 2, "pose task needs dim >= 2");
  require(params.noise >= 0.0, "noise must be nonnegative");
  SynthPoseTask task;
  task.grid = grid;
  task.dim = params.dim;
  task.n_train = params.n_train;
  task.n_val = params.n_val;
  Rng rng(params.seed);
  // Fixed random embedding, drawn before the samples.
  std::vector<double> a(params.dim), b(params.dim), c(params.dim);
  for (std::size_t k = 0; k < params.dim; ++k) {
    a[k] = rng.uniform(-2.0, 2.0);
    b[k] = rng.uniform(-2.0, 2.0);
    c[k] = rng.uniform(-0.5, 0.5);
  }
  const std::size_t n = task.size();
  task.features.resize(n * params.dim);
  task.pose.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pitch = grid.pitch()[rng.index(grid.rows())];
    const double yaw = grid.yaw()[rng.index(grid.cols())];
    task.pose[i] = {pitch, yaw};
    for (std::size_t k = 0; k < params.dim; ++k) {
      const double z = a[k] * pitch / 90.0 + b[k] * yaw / 90.0 + c[k];
      task.features[i * params.dim + k] = std::tanh(z) + rng.normal(0.0, params.noise);
    }
  }
  return task;
}

SynthMultiLabelTask gen_multilabel(std::size_t n, std::size_t classes, std::uint64_t seed) {
  require(n >= 1 && classes >= 2, "multi-label task needs n >= 1 and at least 2 classes");
  SynthMultiLabelTask task;
  task.classes = classes;
  task.dim = classes;
  task.features.resize(n * classes);
  Rng rng(seed);
  std::vector<std::size_t> order(classes);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < classes; ++k) order[k] = k;
    rng.shuffle(std::span<std::size_t>(order));
    const std::size_t positives = std::min<std::size_t>(1 + rng.index(3), classes);
    const std::size_t difficult = std::min<std::size_t>(rng.index(3), classes - positives);
    std::vector<LabelLevel> levels(classes, LabelLevel::kNegative);
    for (std::size_t k = 0; k < positives; ++k) levels[order[k]] = LabelLevel::kPositive;
    for (std::size_t k = 0; k < difficult; ++k) {
      levels[order[positives + k]] = LabelLevel::kDifficult;
    }
    for (std::size_t k = 0; k < classes; ++k) {
      const double base = levels[k] == LabelLevel::kPositive    ? 1.0
                          : levels[k] == LabelLevel::kDifficult ? 0.5
                                                                : 0.0;
      task.features[i * classes + k] = base + rng.normal(0.0, 0.2);
    }
    task.levels.emplace_back(std::move(levels));
  }
  return task;
}

SynthSegTask gen_seg(std::size_t n, std::size_t height, std::size_t width, std::size_t classes,
                     std::uint64_t seed) {
  require(n >= 1, "segmentation task needs n >= 1");
  require(height >= 4 && width >= 4, "segmentation images must be at least 4x4");
  require(classes >= 1, "segmentation task needs at least one object class");
  SynthSegTask task;
  task.height = height;
  task.width = width;
  task.classes = classes;
  Rng rng(seed);
  std::vector<int> labels(classes);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < classes; ++k) labels[k] = static_cast<int>(k + 1);
    rng.shuffle(std::span<int>(labels));
    const std::size_t count = std::min<std::size_t>(1 + rng.index(3), classes);
    std::vector<int> map(height * width, 0);
    std::vector<Rect> rects;
    for (std::size_t r = 0; r < count; ++r) {
      Rect rect;
      rect.height = 2 + rng.index(height / 2);
      rect.width = 2 + rng.index(width / 2);
      rect.top = rng.index(height - rect.height + 1);
      rect.left = rng.index(width - rect.width + 1);
      rect.label = labels[r];
      for (std::size_t y = rect.top; y < rect.top + rect.height; ++y) {
        for (std::size_t x = rect.left; x < rect.left + rect.width; ++x) {
          map[y * width + x] = rect.label;
        }
      }
      rects.push_back(rect);
    }
    task.maps.push_back(std::move(map));
    task.rects.push_back(std::move(rects));
  }
  return task;
}

double boundary_fraction(std::span<const int> map, std::size_t height, std::size_t width) {
  require(map.size() == height * width && !map.empty(), "label map shape mismatch");
  std::size_t boundary = 0;
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const int v = map[y * width + x];
      const bool edge = (y > 0 && map[(y - 1) * width + x] != v) ||
                        (y + 1 < height && map[(y + 1) * width + x] != v) ||
                        (x > 0 && map[y * width + x - 1] != v) ||
                        (x + 1 < width && map[y * width + x + 1] != v);
      boundary += edge;
    }
  }
  return static_cast<double>(boundary) / static_cast<double>(map.size());
}

std::uint64_t task_hash(const SynthAgeTask& task) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  const std::uint64_t shape[] = {task.dim, task.n_train, task.n_val};
  fnv_mix(h, shape, sizeof(shape));
  fnv_mix(h, task.features.data(), task.features.size() * sizeof(double));
  fnv_mix(h, task.mu.data(), task.mu.size() * sizeof(double));
  fnv_mix(h, task.sigma.data(), task.sigma.size() * sizeof(double));
  return h;
}

// --- methods -------------------------------------------------------------------

std::string method_name(Method m) {
  switch (m) {
    case Method::kDldl: return "DLDL";
    case Method::kCConvNet: return "C-ConvNet";
    case Method::kRConvNetL2:
    case Method::kRConvNetL1:
    case Method::kRConvNetEpsIns: return "R-ConvNet";
    case Method::kConvNetLs: return "ConvNet+LS";
    case Method::kConvNetLdAlpha: return "ConvNet+LD";
  }
  return "unknown";
}

std::string method_key(Method m) {
  switch (m) {
    case Method::kDldl: return "dldl";
    case Method::kCConvNet: return "c_convnet";
    case Method::kRConvNetL2: return "r_convnet_l2";
    case Method::kRConvNetL1: return "r_convnet_l1";
    case Method::kRConvNetEpsIns: return "r_convnet_eps_ins";
    case Method::kConvNetLs: return "convnet_ls";
    case Method::kConvNetLdAlpha: return "convnet_ld_alpha";
  }
  return "unknown";
}

std::vector<Method> all_methods() {
  return {Method::kDldl,       Method::kCConvNet,     Method::kRConvNetL2,
          Method::kRConvNetL1, Method::kRConvNetEpsIns, Method::kConvNetLs,
          Method::kConvNetLdAlpha};
}

Method method_from_string(const std::string& key) {
  for (Method m : all_methods()) {
    if (method_key(m) == key) return m;
  }
  throw InputError("unknown method '" + key + "'");
}

LossKind method_loss(Method m) {
  switch (m) {
    case Method::kDldl:
    case Method::kCConvNet:
    case Method::kConvNetLs: return LossKind::kKl;
    case Method::kRConvNetL2: return LossKind::kL2;
    case Method::kRConvNetL1: return LossKind::kL1;
    case Method::kRConvNetEpsIns: return LossKind::kEpsIns;
    case Method::kConvNetLdAlpha: return LossKind::kAlphaDiv;
  }
  return LossKind::kKl;
}

const ReportRow& ExperimentReport::row(const std::string& method,
                                       const std::string& decoder) const {
  for (const auto& r : rows) {
    if (r.method == method && r.decoder == decoder) return r;
  }
  throw InputError("report has no row " + method + "/" + decoder);
}

// --- age comparison ------------------------------------------------------------

namespace {

struct AgeSplits {
  Dataset train;
  Dataset val;
  double target_min = 0.0;
  double target_max = 0.0;
};

AgeSplits age_splits(const SynthAgeTask& task) {
  require(task.n_train >= 1 && task.n_val >= 1, "age task needs train and validation samples");
  AgeSplits s;
  s.train = make_dataset(task.features, task.dim, 0, task.n_train);
  s.val = make_dataset(task.features, task.dim, task.n_train, task.n_val);
  const auto first = task.mu.begin();
  const auto last = first + static_cast<std::ptrdiff_t>(task.n_train);
  s.target_min = *std::min_element(first, last);
  s.target_max = *std::max_element(first, last);
  if (!(s.target_max > s.target_min)) s.target_max = s.target_min + 1.0;
  return s;
}

void fill_age_targets(Method m, const SynthAgeTask& task, const ExperimentConfig& config,
                      AgeSplits& s, double fixed_sigma) {
  for (std::size_t i = 0; i < task.n_train; ++i) {
    const double mu = task.mu[i];
    const double sigma = fixed_sigma >= 0.0 ? fixed_sigma : task.sigma[i];
    std::vector<double> t;
    switch (m) {
      case Method::kDldl:
      case Method::kConvNetLdAlpha: {
        const auto y = gaussian_1d(task.labels, mu, sigma);
        t.assign(y.mass().begin(), y.mass().end());
        break;
      }
      case Method::kCConvNet: {
        const auto y = one_hot(task.labels, mu);
        t.assign(y.mass().begin(), y.mass().end());
        break;
      }
      case Method::kConvNetLs: {
        const auto y = label_smoothing(one_hot(task.labels, mu), config.ls_epsilon);
        t.assign(y.mass().begin(), y.mass().end());
        break;
      }
      default:
        t = {normalize_target(mu, s.target_min, s.target_max)};
        break;
    }
    s.train.targets[i] = std::move(t);
  }
}

// Decoded predictions for every sample of `data`, one vector per decoder.
std::vector<std::vector<double>> decode_age(Method m, const Network& net, const Dataset& data,
                                            const SynthAgeTask& task, const AgeSplits& s,
                                            Execution exec) {
  const auto out = predict_batch(net, data, exec);
  const std::size_t width = net.output_width();
  const std::size_t n = data.size();
  if (is_regression(m)) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = denormalize_target(out[i], s.target_min, s.target_max);
    return {std::move(v)};
  }
  std::vector<double> vmax(n), vexp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = softmax_values(row_of(out, width, i));
    vmax[i] = decode_max(p, task.labels);
    vexp[i] = decode_expectation(p, task.labels);
  }
  return {std::move(vmax), std::move(vexp)};
}

TrainResult train_age_method(Method m, const SynthAgeTask& task, const ExperimentConfig& config,
                             AgeSplits& s, double fixed_sigma) {
  fill_age_targets(m, task, config, s, fixed_sigma);
  Architecture arch;
  arch.head = is_regression(m) ? Head::kRegression : Head::kDistribution;
  arch.widths.push_back(task.dim);
  arch.widths.insert(arch.widths.end(), config.hidden.begin(), config.hidden.end());
  arch.widths.push_back(is_regression(m) ? 1 : task.labels.size());
  TrainConfig tc = config.train;
  tc.loss = method_loss(m);

  const std::span<const double> train_mu(task.mu.data(), task.n_train);
  const std::span<const double> val_mu(task.mu.data() + task.n_train, task.n_val);
  const EpochMonitor monitor = [&](const Network& net) {
    MonitorResult r;
    for (const auto& v : decode_age(m, net, s.train, task, s, config.exec)) {
      r.train_mae.push_back(mae(v, train_mu));
    }
    for (const auto& v : decode_age(m, net, s.val, task, s, config.exec)) {
      r.val_mae.push_back(mae(v, val_mu));
    }
    return r;
  };
  return train(s.train, arch, tc, monitor, config.exec);
}

std::vector<ReportRow> evaluate_age(Method m, const Network& net, const SynthAgeTask& task,
                                   const AgeSplits& s, Execution exec) {
  const std::span<const double> train_mu(task.mu.data(), task.n_train);
  const std::span<const double> val_mu(task.mu.data() + task.n_train, task.n_val);
  const std::span<const double> val_sigma(task.sigma.data() + task.n_train, task.n_val);
  const auto names = decoder_names(m);
  const auto train_preds = decode_age(m, net, s.train, task, s, exec);
  const auto val_preds = decode_age(m, net, s.val, task, s, exec);
  std::vector<ReportRow> rows;
  for (std::size_t d = 0; d < names.size(); ++d) {
    ReportRow row = make_row(m, names[d]);
    row.metrics.count = task.n_val;
    row.metrics.set("train_mae", mae(train_preds[d], train_mu));
    row.metrics.set("val_mae", mae(val_preds[d], val_mu));
    row.metrics.set("val_eps_error", eps_error(val_preds[d], val_mu, val_sigma));
    row.cs_curve = cs_curve(val_preds[d], val_mu, 30);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TrainResult train_method(const SynthAgeTask& task, Method m, const ExperimentConfig& config) {
  AgeSplits s = age_splits(task);
  return train_age_method(m, task, config, s, config.sigma);
}

std::vector<ReportRow> evaluate_method(const SynthAgeTask& task, Method m, const Network& net,
                                       const ExperimentConfig& config) {
  return evaluate_age(m, net, task, age_splits(task), config.exec);
}

ExperimentReport run_comparison(const SynthAgeTask& task, const std::vector<Method>& methods,
                                const ExperimentConfig& config) {
  require(!methods.empty(), "comparison needs at least one method");
  ExperimentReport report;
  report.task = "age";
  AgeSplits s = age_splits(task);
  for (Method m : methods) {
    const auto result = train_age_method(m, task, config, s, config.sigma);
    const std::size_t first = report.rows.size();
    for (auto& row : evaluate_age(m, result.net, task, s, config.exec)) {
      report.rows.push_back(std::move(row));
    }
    attach_history(report.rows, first, result.history);
  }
  return report;
}

std::vector<SweepPoint> sigma_sweep(const SynthAgeTask& task, std::span<const double> sigmas,
                                    const ExperimentConfig& config) {
  AgeSplits s = age_splits(task);
  const std::span<const double> val_mu(task.mu.data() + task.n_train, task.n_val);
  const std::size_t decoder = config.sweep_decoder == Decoder::kMax ? 0 : 1;
  std::vector<SweepPoint> curve;
  for (double sigma : sigmas) {
    require(sigma >= 0.0, "sweep sigmas must be nonnegative");
    const auto result = train_age_method(Method::kDldl, task, config, s, sigma);
    const auto preds = decode_age(Method::kDldl, result.net, s.val, task, s, config.exec);
    curve.push_back({sigma, mae(preds[decoder], val_mu)});
  }
  return curve;
}

std::vector<double> default_sweep_sigmas(double step) {
  require(step > 0.0, "sweep step must be positive");
  std::vector<double> out;
  for (int k = 0; k <= 6; ++k) out.push_back(0.5 * k * step);
  return out;
}

// --- pose comparison -----------------------------------------------------------

namespace {

struct PoseSplits {
  Dataset train;
  Dataset val;
  double pitch_min = 0, pitch_max = 0, yaw_min = 0, yaw_max = 0;
};

PoseSplits pose_splits(const SynthPoseTask& task) {
  require(task.n_train >= 1 && task.n_val >= 1, "pose task needs train and validation samples");
  PoseSplits s;
  s.train = make_dataset(task.features, task.dim, 0, task.n_train);
  s.val = make_dataset(task.features, task.dim, task.n_train, task.n_val);
  s.pitch_min = task.grid.pitch().front();
  s.pitch_max = task.grid.pitch().back();
  s.yaw_min = task.grid.yaw().front();
  s.yaw_max = task.grid.yaw().back();
  return s;
}

std::vector<std::vector<PosePair>> decode_pose(Method m, const Network& net, const Dataset& data,
                                               const SynthPoseTask& task, const PoseSplits& s,
                                               Execution exec) {
  const auto out = predict_batch(net, data, exec);
  const std::size_t width = net.output_width();
  const std::size_t n = data.size();
  if (is_regression(m)) {
    std::vector<PosePair> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = {denormalize_target(out[i * 2], s.pitch_min, s.pitch_max),
              denormalize_target(out[i * 2 + 1], s.yaw_min, s.yaw_max)};
    }
    return {std::move(v)};
  }
  std::vector<PosePair> vmax(n), vexp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = softmax_values(row_of(out, width, i));
    vmax[i] = decode_joint_max(p, task.grid);
    vexp[i] = decode_joint_expectation(p, task.grid);
  }
  return {std::move(vmax), std::move(vexp)};
}

void fill_pose_targets(Method m, const SynthPoseTask& task, const ExperimentConfig& config,
                       PoseSplits& s) {
  for (std::size_t i = 0; i < task.n_train; ++i) {
    const auto [pitch, yaw] = task.pose[i];
    std::vector<double> t;
    const std::size_t cell = nearest_index(task.grid.pitch(), pitch) * task.grid.cols() +
                             nearest_index(task.grid.yaw(), yaw);
    switch (m) {
      case Method::kDldl:
      case Method::kConvNetLdAlpha: {
        const auto y = gaussian_2d(task.grid, {pitch, yaw}, config.pose_sigma);
        t.assign(y.mass().begin(), y.mass().end());
        break;
      }
      case Method::kCConvNet: {
        const auto y = one_hot_index(task.grid.size(), cell);
        t.assign(y.mass().begin(), y.mass().end());
        break;
      }
      case Method::kConvNetLs: {
        const auto y = label_smoothing(one_hot_index(task.grid.size(), cell), config.ls_epsilon);
        t.assign(y.mass().begin(), y.mass().end());
        break;
      }
      default:
        t = {normalize_target(pitch, s.pitch_min, s.pitch_max),
             normalize_target(yaw, s.yaw_min, s.yaw_max)};
        break;
    }
    s.train.targets[i] = std::move(t);
  }
}

TrainResult train_pose_method(Method m, const SynthPoseTask& task, const ExperimentConfig& config,
                              PoseSplits& s) {
  fill_pose_targets(m, task, config, s);
  Architecture arch;
  arch.head = is_regression(m) ? Head::kRegression : Head::kDistribution;
  arch.widths.push_back(task.dim);
  arch.widths.insert(arch.widths.end(), config.hidden.begin(), config.hidden.end());
  arch.widths.push_back(is_regression(m) ? 2 : task.grid.size());
  TrainConfig tc = config.train;
  tc.loss = method_loss(m);

  const std::span<const PosePair> train_pose(task.pose.data(), task.n_train);
  const std::span<const PosePair> val_pose(task.pose.data() + task.n_train, task.n_val);
  const EpochMonitor monitor = [&](const Network& net) {
    MonitorResult r;
    for (const auto& v : decode_pose(m, net, s.train, task, s, config.exec)) {
      r.train_mae.push_back(pose_mae(v, train_pose).joint);
    }
    for (const auto& v : decode_pose(m, net, s.val, task, s, config.exec)) {
      r.val_mae.push_back(pose_mae(v, val_pose).joint);
    }
    return r;
  };
  return train(s.train, arch, tc, monitor, config.exec);
}

std::vector<ReportRow> evaluate_pose(Method m, const Network& net, const SynthPoseTask& task,
                                     const PoseSplits& s, Execution exec) {
  const std::span<const PosePair> val_pose(task.pose.data() + task.n_train, task.n_val);
  const auto names = decoder_names(m);
  const auto val_preds = decode_pose(m, net, s.val, task, s, exec);
  std::vector<ReportRow> rows;
  for (std::size_t d = 0; d < names.size(); ++d) {
    ReportRow row = make_row(m, names[d]);
    row.metrics.count = task.n_val;
    const auto err = pose_mae(val_preds[d], val_pose);
    row.metrics.set("val_pitch_mae", err.pitch);
    row.metrics.set("val_yaw_mae", err.yaw);
    row.metrics.set("val_joint_mae", err.joint);
    if (!is_regression(m)) {
      const auto acc = pose_acc(val_preds[d], val_pose);
      row.metrics.set("val_pitch_acc", acc.pitch);
      row.metrics.set("val_yaw_acc", acc.yaw);
      row.metrics.set("val_joint_acc", acc.joint);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TrainResult train_method(const SynthPoseTask& task, Method m, const ExperimentConfig& config) {
  PoseSplits s = pose_splits(task);
  return train_pose_method(m, task, config, s);
}

std::vector<ReportRow> evaluate_method(const SynthPoseTask& task, Method m, const Network& net,
                                       const ExperimentConfig& config) {
  return evaluate_pose(m, net, task, pose_splits(task), config.exec);
}

ExperimentReport run_comparison(const SynthPoseTask& task, const std::vector<Method>& methods,
                                const ExperimentConfig& config) {
  require(!methods.empty(), "comparison needs at least one method");
  ExperimentReport report;
  report.task = "pose";
  PoseSplits s = pose_splits(task);
  for (Method m : methods) {
    const auto result = train_pose_method(m, task, config, s);
    const std::size_t first = report.rows.size();
    for (auto& row : evaluate_pose(m, result.net, task, s, config.exec)) {
      report.rows.push_back(std::move(row));
    }
    attach_history(report.rows, first, result.history);
  }
  return report;
}

}  // namespace dldl

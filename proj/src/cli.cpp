#include "dldl/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "dldl/config.hpp"
#include "dldl/construct.hpp"
#include "dldl/error.hpp"
#include "dldl/gradcheck.hpp"
#include "dldl/io.hpp"
#include "dldl/synth.hpp"

namespace dldl {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, Common& c, bool with_config) {
  if (with_config) {
    cmd->add_option("--config", c.config, "run config file (dldl.config/1)")
        ->check(CLI::ExistingFile);
  }
  cmd->add_option("--seed", c.seed, "override the top-level seed");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
}

RunConfig resolve_config(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig::parse(std::string("schema = ") + kConfigSchema)
                                   : RunConfig::load(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.out) cfg.out = *c.out;
  if (c.format) cfg.format = *c.format;
  spdlog::debug("config: {}", cfg.to_json().dump());
  return cfg;
}

// --- dist ----------------------------------------------------------------------

template <class T>
T get(const Json& obj, const std::string& key, const std::string& where) {
  require(obj.is_object() && obj.contains(key), where + ": missing '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T get_or(const Json& obj, const std::string& key, T fallback, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return get<T>(obj, key, where);
}

const Json& samples_of(const Json& doc) {
  require(doc.contains("samples") && doc.at("samples").is_array(),
          "annotation: 'samples' must be an array");
  return doc.at("samples");
}

std::string sample_where(std::size_t i) { return "samples[" + std::to_string(i) + "]"; }

std::string sample_id(const Json& s, std::size_t i) {
  if (s.is_object() && s.contains("id")) {
    const auto& id = s.at("id");
    return id.is_string() ? id.get<std::string>() : id.dump();
  }
  return std::to_string(i);
}

struct NormCheck {
  std::size_t count = 0;
  double max_sum_error = 0.0;
  double min_mass = 1.0;

  void add(std::span<const double> mass) {
    double total = 0.0;
    for (double v : mass) {
      total += v;
      min_mass = std::min(min_mass, v);
    }
    max_sum_error = std::max(max_sum_error, std::abs(total - 1.0));
    ++count;
  }
  bool ok() const { return max_sum_error <= kNormTolerance && min_mass >= 0.0; }
};

struct DistOutput {
  Json json;
  std::string csv;
  NormCheck check;
};

void csv_row(std::ostringstream& csv, const std::string& id, std::span<const double> mass) {
  csv << id;
  for (double v : mass) csv << ',' << io::format_double(v);
  csv << '\n';
}

DistOutput dist_age(const Json& doc) {
  DistOutput o;
  const LabelSet1D labels = doc.contains("labels") ? io::label_set_from_json(doc.at("labels"))
                                                   : LabelSet1D::make_range(1, 85, 1);
  std::ostringstream csv;
  csv << "id";
  for (double v : labels.values()) csv << ',' << io::format_double(v);
  csv << '\n';
  Json dists = Json::array();
  const auto& samples = samples_of(doc);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const auto where = sample_where(i);
    const double mu = get<double>(s, "mu", where);
    const double sigma = get<double>(s, "sigma", where);
    require(sigma >= 0.0, where + ".sigma: must be >= 0");
    require(mu >= labels.min() && mu <= labels.max(), where + ".mu: outside the label range");
    const auto y = gaussian_1d(labels, mu, sigma);
    o.check.add(y.mass());
    const auto id = sample_id(s, i);
    dists.push_back(Json{{"id", id}, {"mu", mu}, {"sigma", sigma}, {"mass", y.mass()}});
    csv_row(csv, id, y.mass());
  }
  o.json = Json{{"labels", io::to_json(labels)}, {"distributions", dists}};
  o.csv = csv.str();
  return o;
}

DistOutput dist_pose(const Json& doc) {
  DistOutput o;
  LabelGrid2D grid = pointing04_grid();
  if (doc.contains("grid")) {
    grid = LabelGrid2D(get<std::vector<double>>(doc.at("grid"), "pitch", "grid"),
                       get<std::vector<double>>(doc.at("grid"), "yaw", "grid"));
  }
  std::ostringstream csv;
  csv << "id";
  for (double p : grid.pitch()) {
    for (double y : grid.yaw()) csv << ',' << io::format_double(p) << '/' << io::format_double(y);
  }
  csv << '\n';
  Json dists = Json::array();
  const auto& samples = samples_of(doc);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const auto where = sample_where(i);
    const double pitch = get<double>(s, "pitch", where);
    const double yaw = get<double>(s, "yaw", where);
    const double sigma = get<double>(s, "sigma", where);
    require(sigma > 0.0, where + ".sigma: must be > 0");
    const auto y = gaussian_2d(grid, {pitch, yaw}, sigma);
    o.check.add(y.mass());
    const auto id = sample_id(s, i);
    dists.push_back(
        Json{{"id", id}, {"pitch", pitch}, {"yaw", yaw}, {"sigma", sigma}, {"mass", y.mass()}});
    csv_row(csv, id, y.mass());
  }
  o.json = Json{{"grid", {{"pitch", grid.pitch()}, {"yaw", grid.yaw()}}},
                {"layout", "row-major, pitch rows x yaw columns"},
                {"distributions", dists}};
  o.csv = csv.str();
  return o;
}

DistOutput dist_multilabel(const Json& doc) {
  DistOutput o;
  const auto classes = get<std::size_t>(doc, "classes", "annotation");
  require(classes >= 1, "annotation.classes: must be >= 1");
  MultiLabelWeights w;
  if (doc.contains("weights")) {
    const auto& wj = doc.at("weights");
    w.positive = get_or<double>(wj, "positive", w.positive, "weights");
    w.difficult = get_or<double>(wj, "difficult", w.difficult, "weights");
    w.negative = get_or<double>(wj, "negative", w.negative, "weights");
    w.epsilon = get_or<double>(wj, "epsilon", w.epsilon, "weights");
  }
  std::ostringstream csv;
  csv << "id";
  for (std::size_t c = 0; c < classes; ++c) csv << ",c" << c;
  csv << '\n';
  Json dists = Json::array();
  const auto& samples = samples_of(doc);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const auto where = sample_where(i);
    std::vector<LabelLevel> levels(classes, LabelLevel::kNegative);
    auto mark = [&](const char* key, LabelLevel level) {
      for (auto c : get_or<std::vector<std::size_t>>(s, key, {}, where)) {
        require(c < classes, where + "." + key + ": class " + std::to_string(c) + " out of range");
        require(levels[c] == LabelLevel::kNegative,
                where + ": class " + std::to_string(c) + " listed twice");
        levels[c] = level;
      }
    };
    mark("positive", LabelLevel::kPositive);
    mark("difficult", LabelLevel::kDifficult);
    const auto y = multilabel(MultiLabelLevels(levels), w);
    o.check.add(y.mass());
    const auto id = sample_id(s, i);
    dists.push_back(Json{{"id", id}, {"mass", y.mass()}});
    csv_row(csv, id, y.mass());
  }
  o.json = Json{{"classes", classes},
                {"weights",
                 {{"positive", w.positive},
                  {"difficult", w.difficult},
                  {"negative", w.negative},
                  {"epsilon", w.epsilon}}},
                {"distributions", dists}};
  o.csv = csv.str();
  return o;
}

DistOutput dist_segmentation(const Json& doc, Execution exec) {
  DistOutput o;
  const auto height = get<std::size_t>(doc, "height", "annotation");
  const auto width = get<std::size_t>(doc, "width", "annotation");
  const auto classes = get<std::size_t>(doc, "classes", "annotation");
  std::size_t ksize = 5;
  double ksigma = 1.0;
  if (doc.contains("kernel")) {
    ksize = get_or<std::size_t>(doc.at("kernel"), "size", ksize, "kernel");
    ksigma = get_or<double>(doc.at("kernel"), "sigma", ksigma, "kernel");
  }
  const auto kernel = gaussian_kernel(ksize, ksigma);
  require(doc.contains("maps") && doc.at("maps").is_array(), "annotation: 'maps' must be an array");
  const auto& maps = doc.at("maps");
  std::ostringstream csv;
  csv << "image,row,col";
  for (std::size_t c = 0; c < classes; ++c) csv << ",c" << c;
  csv << '\n';
  Json fields = Json::array();
  for (std::size_t m = 0; m < maps.size(); ++m) {
    const auto where = "maps[" + std::to_string(m) + "]";
    std::vector<int> labels;
    try {
      labels = maps[m].get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    SpatialLabelField field = [&] {
      try {
        return SpatialLabelField::from_labels(height, width, classes, labels);
      } catch (const InputError& e) {
        throw InputError(where + ": " + e.what());
      }
    }();
    const auto smoothed = smooth_segmentation(field, kernel, exec);
    for (std::size_t i = 0; i < height; ++i) {
      for (std::size_t j = 0; j < width; ++j) {
        o.check.add(smoothed.pixel(i, j));
        csv_row(csv, std::to_string(m) + ',' + std::to_string(i) + ',' + std::to_string(j),
                smoothed.pixel(i, j));
      }
    }
    fields.push_back(Json{{"mass", std::vector<double>(smoothed.mass().begin(),
                                                       smoothed.mass().end())}});
  }
  o.json = Json{{"height", height},
                {"width", width},
                {"classes", classes},
                {"kernel",
                 {{"size", kernel.size},
                  {"sigma", ksigma},
                  {"padding", kernel.padding},
                  {"stride", kernel.stride}}},
                {"layout", "mass[(row * width + col) * classes + class]"},
                {"fields", fields}};
  o.csv = csv.str();
  return o;
}

int cmd_dist(const std::string& input, const Common& c, std::ostream& out) {
  const Json doc = io::read_json_file(input);
  io::require_schema(doc, io::kAnnotationSchema);
  const auto kind = get<std::string>(doc, "kind", "annotation");
  DistOutput o;
  if (kind == "age") {
    o = dist_age(doc);
  } else if (kind == "pose") {
    o = dist_pose(doc);
  } else if (kind == "multilabel") {
    o = dist_multilabel(doc);
  } else if (kind == "segmentation") {
    o = dist_segmentation(doc, Execution::kParallel);
  } else {
    throw InputError("annotation.kind: unknown kind '" + kind +
                     "' (expected age, pose, multilabel or segmentation)");
  }
  const fs::path dir = c.out.value_or("out");
  const std::string format = c.format.value_or("json");
  Json result{{"schema", io::kDistributionSchema}, {"kind", kind}};
  result["normalization"] = Json{{"count", o.check.count},
                                 {"max_abs_sum_error", o.check.max_sum_error},
                                 {"min_mass", o.check.min_mass},
                                 {"ok", o.check.ok()}};
  for (auto& [k, v] : o.json.items()) result[k] = v;
  fs::path written;
  if (format == "csv") {
    written = dir / "distributions.csv";
    io::write_text_file(written, o.csv);
  } else {
    written = dir / "distributions.json";
    io::write_json_file(written, result);
  }
  out << "normalization check: " << o.check.count << " distribution"
      << (o.check.count == 1 ? "" : "s") << ", max |sum - 1| = " << o.check.max_sum_error
      << ", min mass = " << o.check.min_mass << ": " << (o.check.ok() ? "ok" : "FAILED") << '\n';
  out << "wrote " << written.string() << '\n';
  if (!o.check.ok()) throw NumericalError("constructed distributions failed the normalization check");
  return kExitOk;
}

// --- train / eval --------------------------------------------------------------

void log_history(const TrainHistory& h) {
  for (const auto& e : h.epochs) {
    spdlog::debug("epoch {:3d} loss {:.6f} val_mae[0] {:.4f}", e.epoch, e.train_loss,
                  e.val_mae.empty() ? 0.0 : e.val_mae.front());
  }
}

int cmd_train(const Common& c, std::ostream& out) {
  const RunConfig cfg = resolve_config(c);
  const auto exp = cfg.resolved_experiment();
  TrainResult result;
  if (cfg.task == "age") {
    result = train_method(gen_age(cfg.age_params()), cfg.method, exp);
  } else {
    result = train_method(gen_pose(cfg.pose_params(), pointing04_grid()), cfg.method, exp);
  }
  log_history(result.history);
  io::Checkpoint ck;
  ck.net = result.net;
  ck.seed = cfg.seed;
  ck.meta = Json{{"task", cfg.task}, {"method", method_key(cfg.method)}, {"config", cfg.to_json()}};
  const fs::path dir = cfg.out;
  io::write_json_file(dir / "checkpoint.json", io::to_json(ck));
  if (cfg.format == "csv") {
    io::write_text_file(dir / "history.csv", io::history_csv(result.history));
  } else {
    io::write_json_file(dir / "history.json", io::to_json(result.history));
  }
  out << "trained " << method_key(cfg.method) << " on " << cfg.task << " for "
      << result.history.epochs.size() << " epochs";
  if (!result.history.epochs.empty()) {
    const auto& last = result.history.epochs.back();
    out << "; final val MAE";
    for (double v : last.val_mae) out << ' ' << v;
  }
  out << "\nwrote " << (dir / "checkpoint.json").string() << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& checkpoint, const Common& c, std::ostream& out) {
  const RunConfig cfg = resolve_config(c);
  const auto ck = io::checkpoint_from_json(io::read_json_file(checkpoint));
  const auto task_name = get<std::string>(ck.meta, "task", "checkpoint.meta");
  const Method method = method_from_string(get<std::string>(ck.meta, "method", "checkpoint.meta"));
  require(task_name == cfg.task,
          "checkpoint was trained on task '" + task_name + "' but the config selects '" + cfg.task +
              "'");
  const auto exp = cfg.resolved_experiment();
  std::vector<ReportRow> rows;
  std::optional<SynthAgeTask> age;
  if (cfg.task == "age") {
    age = gen_age(cfg.age_params());
    require(ck.net.input_width() == age->dim, "checkpoint input width does not match config dim");
    rows = evaluate_method(*age, method, ck.net, exp);
  } else {
    const auto pose = gen_pose(cfg.pose_params(), pointing04_grid());
    require(ck.net.input_width() == pose.dim, "checkpoint input width does not match config dim");
    rows = evaluate_method(pose, method, ck.net, exp);
  }

  const fs::path dir = cfg.out;
  if (cfg.format == "csv") {
    ExperimentReport r{cfg.task, rows};
    io::write_text_file(dir / "metrics.csv", io::report_csv(r));
  } else {
    Json jrows = Json::array();
    for (const auto& r : rows) {
      Json metrics = Json::object();
      for (const auto& [k, v] : r.metrics.metrics) metrics[k] = v;
      jrows.push_back(Json{{"decoder", r.decoder}, {"count", r.metrics.count}, {"metrics", metrics}});
    }
    io::write_json_file(dir / "metrics.json", Json{{"schema", io::kMetricsSchema},
                                                   {"task", cfg.task},
                                                   {"method", method_key(method)},
                                                   {"loss", rows.front().loss},
                                                   {"rows", jrows}});
  }
  if (age) {
    std::ostringstream csv;
    csv << "g";
    for (const auto& r : rows) csv << ",cs_" << r.decoder;
    csv << '\n';
    for (std::size_t g = 0; g < rows.front().cs_curve.size(); ++g) {
      csv << g + 1;
      for (const auto& r : rows) csv << ',' << io::format_double(r.cs_curve[g]);
      csv << '\n';
    }
    io::write_text_file(dir / "cs_curve.csv", csv.str());
  }
  for (const auto& r : rows) {
    out << method_key(method) << " (" << r.decoder << ")";
    for (const auto& [k, v] : r.metrics.metrics) out << ' ' << k << '=' << v;
    out << '\n';
  }
  return kExitOk;
}

// --- compare / sweep -----------------------------------------------------------

int cmd_compare(const Common& c, std::ostream& out) {
  const RunConfig cfg = resolve_config(c);
  const auto exp = cfg.resolved_experiment();
  ExperimentReport report;
  if (cfg.task == "age") {
    report = run_comparison(gen_age(cfg.age_params()), cfg.methods, exp);
  } else {
    report = run_comparison(gen_pose(cfg.pose_params(), pointing04_grid()), cfg.methods, exp);
  }
  const fs::path dir = cfg.out;
  io::write_json_file(dir / "report.json", io::to_json(report, cfg.to_json()));
  io::write_text_file(dir / "report.csv", io::report_csv(report));
  const std::string key = cfg.task == "age" ? "val_mae" : "val_joint_mae";
  for (const auto& r : report.rows) {
    out << r.method << " (" << r.loss << ", " << r.decoder << ") " << key << '='
        << r.metrics.get(key) << '\n';
  }
  out << "wrote " << (dir / "report.json").string() << " and " << (dir / "report.csv").string()
      << '\n';
  return kExitOk;
}

int cmd_sweep(const Common& c, std::ostream& out) {
  const RunConfig cfg = resolve_config(c);
  require(cfg.task == "age", "sweep supports task 'age' only");
  const auto task = gen_age(cfg.age_params());
  const auto sigmas =
      cfg.sweep_sigmas.empty() ? default_sweep_sigmas(task.labels.step()) : cfg.sweep_sigmas;
  const auto curve = sigma_sweep(task, sigmas, cfg.resolved_experiment());
  const fs::path dir = cfg.out;
  io::write_json_file(dir / "sweep.json", io::to_json(curve, cfg.to_json()));
  io::write_text_file(dir / "sweep.csv", io::sweep_csv(curve));
  for (const auto& p : curve) out << "sigma=" << p.sigma << " val_mae=" << p.val_mae << '\n';
  out << "wrote " << (dir / "sweep.json").string() << '\n';
  return kExitOk;
}

// --- gradcheck -----------------------------------------------------------------

int cmd_gradcheck(const Common& c, std::ostream& out) {
  const auto report = run_gradcheck(c.seed.value_or(0));
  for (const auto& r : report.results) {
    out << r.name << ": " << r.entries << " entries over " << r.cases << " cases";
    if (r.skipped) out << " (" << r.skipped << " kink cases redrawn)";
    out << ", max rel err " << r.max_rel_error << '\n';
  }
  out << "alpha-divergence form: T = +2 * sum_k (sqrt(y_k) - sqrt(yhat_k))^2\n";
  out << "max rel err " << report.max_rel_error() << (report.passed() ? " <= " : " > ")
      << kGradCheckTolerance << (report.passed() ? ": PASS" : ": FAIL") << '\n';
  if (c.out) io::write_json_file(fs::path(*c.out) / "gradcheck.json", io::to_json(report));
  return report.passed() ? kExitOk : kExitNumerical;
}

void setup_logging(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_st>(err);
  auto logger = std::make_shared<spdlog::logger>("dldl", sink);
  logger->set_pattern("[%l] %v");
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("DLDL_LOG")) level = spdlog::level::from_str(env);
  logger->set_level(level);
  spdlog::set_default_logger(logger);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  setup_logging(err);
  CLI::App app{"Label distribution learning toolkit", "dldl"};
  app.require_subcommand(1);
  Common common;

  std::string annotation;
  auto* dist = app.add_subcommand("dist", "build label distributions from an annotation file");
  dist->add_option("annotation", annotation, "annotation JSON (dldl.annotation/1)")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(dist, common, false);

  auto* train = app.add_subcommand("train", "train one method; writes checkpoint and history");
  add_common(train, common, true);

  std::string checkpoint;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint; writes metrics and CS curve");
  eval->add_option("checkpoint", checkpoint, "checkpoint JSON")->required()->check(CLI::ExistingFile);
  add_common(eval, common, true);

  auto* compare = app.add_subcommand("compare", "train and compare methods on one task");
  add_common(compare, common, true);

  auto* sweep = app.add_subcommand("sweep", "validation MAE of DLDL across label sigmas");
  add_common(sweep, common, true);

  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient report");
  gradcheck->add_option("--seed", common.seed, "random case seed");
  gradcheck->add_option("--out", common.out, "write gradcheck.json to this directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*dist) return cmd_dist(annotation, common, out);
    if (*train) return cmd_train(common, out);
    if (*eval) return cmd_eval(checkpoint, common, out);
    if (*compare) return cmd_compare(common, out);
    if (*sweep) return cmd_sweep(common, out);
    if (*gradcheck) return cmd_gradcheck(common, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace dldl

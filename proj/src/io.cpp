#include "dldl/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dldl/error.hpp"

namespace dldl::io {

Json to_json(const LabelSet1D& set) {
  return Json{{"min", set.min()}, {"max", set.max()}, {"step", set.step()}};
}

LabelSet1D label_set_from_json(const Json& j) {
  require(j.is_object() && j.contains("min") && j.contains("max") && j.contains("step"),
          "label set must be an object with min, max and step");
  return LabelSet1D::make_range(j.at("min").get<double>(), j.at("max").get<double>(),
                                j.at("step").get<double>());
}

Json to_json(const Checkpoint& ck) {
  Json arch = Json::array();
  arch.push_back(ck.net.input_width());
  for (const auto& l : ck.net.layers) arch.push_back(l.out);
  Json layers = Json::array();
  for (const auto& l : ck.net.layers) {
    layers.push_back(Json{{"in", l.in},
                          {"out", l.out},
                          {"activation", std::string(to_string(l.activation))},
                          {"weights", l.weights},
                          {"biases", l.biases}});
  }
  return Json{{"schema", kCheckpointSchema},
              {"architecture", arch},
              {"head", std::string(to_string(ck.net.head))},
              {"seed", ck.seed},
              {"meta", ck.meta},
              {"layers", layers}};
}

Checkpoint checkpoint_from_json(const Json& j) {
  require_schema(j, kCheckpointSchema);
  Checkpoint ck;
  try {
    ck.seed = j.at("seed").get<std::uint64_t>();
    ck.meta = j.value("meta", Json::object());
    ck.net.head = head_from_string(j.at("head").get<std::string>());
    for (const auto& lj : j.at("layers")) {
      DenseLayer l;
      l.in = lj.at("in").get<std::size_t>();
      l.out = lj.at("out").get<std::size_t>();
      l.activation = activation_from_string(lj.at("activation").get<std::string>());
      l.weights = lj.at("weights").get<std::vector<double>>();
      l.biases = lj.at("biases").get<std::vector<double>>();
      ck.net.layers.push_back(std::move(l));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed checkpoint: ") + e.what());
  }
  ck.net.validate();
  const auto& arch = j.at("architecture");
  require(arch.size() == ck.net.layers.size() + 1 &&
              arch.front().get<std::size_t>() == ck.net.input_width(),
          "checkpoint architecture does not match its layers");
  return ck;
}

Json to_json(const MetricReport& report) {
  Json metrics = Json::object();
  for (const auto& [k, v] : report.metrics) metrics[k] = v;
  return Json{{"schema", kMetricsSchema}, {"count", report.count}, {"metrics", metrics}};
}

Json to_json(const ExperimentReport& report, const Json& config) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json metrics = Json::object();
    for (const auto& [k, v] : r.metrics.metrics) metrics[k] = v;
    Json history = Json::array();
    for (const auto& h : r.history) {
      history.push_back(Json{{"epoch", h.epoch},
                             {"train_loss", h.train_loss},
                             {"train_mae", h.train_mae},
                             {"val_mae", h.val_mae}});
    }
    Json row{{"method", r.method},
             {"loss", r.loss},
             {"decoder", r.decoder},
             {"count", r.metrics.count},
             {"metrics", metrics}};
    if (!r.cs_curve.empty()) row["cs_curve"] = r.cs_curve;
    row["history"] = history;
    rows.push_back(std::move(row));
  }
  return Json{{"schema", kReportSchema}, {"task", report.task}, {"config", config}, {"rows", rows}};
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string report_csv(const ExperimentReport& report) {
  std::vector<std::string> columns;
  for (const auto& r : report.rows) {
    for (const auto& [k, v] : r.metrics.metrics) {
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    }
  }
  std::ostringstream out;
  out << "method,loss,decoder,count";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (const auto& r : report.rows) {
    out << r.method << ',' << r.loss << ',' << r.decoder << ',' << r.metrics.count;
    for (const auto& c : columns) {
      out << ',';
      for (const auto& [k, v] : r.metrics.metrics) {
        if (k == c) out << format_double(v);
      }
    }
    out << '\n';
  }
  return out.str();
}

Json to_json(const std::vector<SweepPoint>& curve, const Json& config) {
  Json points = Json::array();
  for (const auto& p : curve) points.push_back(Json{{"sigma", p.sigma}, {"val_mae", p.val_mae}});
  return Json{{"schema", kSweepSchema}, {"config", config}, {"points", points}};
}

std::string sweep_csv(const std::vector<SweepPoint>& curve) {
  std::ostringstream out;
  out << "sigma,val_mae\n";
  for (const auto& p : curve) out << format_double(p.sigma) << ',' << format_double(p.val_mae) << '\n';
  return out.str();
}

Json to_json(const TrainHistory& history) {
  Json epochs = Json::array();
  for (const auto& e : history.epochs) {
    epochs.push_back(Json{{"epoch", e.epoch},
                          {"train_loss", e.train_loss},
                          {"train_mae", e.train_mae},
                          {"val_mae", e.val_mae}});
  }
  return Json{{"schema", kHistorySchema}, {"epochs", epochs}};
}

std::string history_csv(const TrainHistory& history) {
  std::ostringstream out;
  const std::size_t channels =
      history.epochs.empty() ? 0 : history.epochs.front().val_mae.size();
  out << "epoch,train_loss";
  for (std::size_t d = 0; d < channels; ++d) out << ",train_mae_" << d << ",val_mae_" << d;
  out << '\n';
  for (const auto& e : history.epochs) {
    out << e.epoch << ',' << format_double(e.train_loss);
    for (std::size_t d = 0; d < channels; ++d) {
      out << ',' << format_double(e.train_mae[d]) << ',' << format_double(e.val_mae[d]);
    }
    out << '\n';
  }
  return out.str();
}

Json to_json(const GradCheckReport& report) {
  Json checks = Json::array();
  for (const auto& r : report.results) {
    checks.push_back(Json{{"name", r.name},
                          {"cases", r.cases},
                          {"skipped", r.skipped},
                          {"entries", r.entries},
                          {"max_rel_error", r.max_rel_error}});
  }
  return Json{{"schema", kGradCheckSchema},
              {"seed", report.seed},
              {"step", kGradCheckStep},
              {"tolerance", kGradCheckTolerance},
              {"alpha_divergence_form", "T = +2 * sum_k (sqrt(y_k) - sqrt(yhat_k))^2"},
              {"max_rel_error", report.max_rel_error()},
              {"passed", report.passed()},
              {"checks", checks}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot write '" + path.string() + "'");
  out << text;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void require_schema(const Json& j, const char* expected) {
  require(j.is_object() && j.contains("schema") && j.at("schema").is_string(),
          std::string("missing schema field (expected ") + expected + ")");
  const auto got = j.at("schema").get<std::string>();
  require(got == expected, "unsupported schema '" + got + "' (expected " + expected + ")");
}

}  // namespace dldl::io

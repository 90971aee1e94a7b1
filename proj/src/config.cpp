#include "dldl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dldl/error.hpp"
#include "dldl/rng.hpp"

namespace dldl {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    require(!item.empty(), "empty list item");
    out.push_back(item);
  }
  require(!out.empty(), "empty list");
  return out;
}

double parse_double(const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  require(res.ec == std::errc() && res.ptr == v.data() + v.size() && std::isfinite(out),
          "expected a number, got '" + v + "'");
  return out;
}

std::uint64_t parse_uint(const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  require(res.ec == std::errc() && res.ptr == v.data() + v.size(),
          "expected a nonnegative integer, got '" + v + "'");
  return out;
}

int parse_int(const std::string& v) {
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  require(res.ec == std::errc() && res.ptr == v.data() + v.size(),
          "expected an integer, got '" + v + "'");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"task",
       [](RunConfig& c, const std::string& v) {
         require(v == "age" || v == "pose", "task must be 'age' or 'pose'");
         c.task = v;
       }},
      {"n_train", [](RunConfig& c, const std::string& v) { c.n_train = parse_uint(v); }},
      {"n_val", [](RunConfig& c, const std::string& v) { c.n_val = parse_uint(v); }},
      {"dim", [](RunConfig& c, const std::string& v) { c.dim = parse_uint(v); }},
      {"noise", [](RunConfig& c, const std::string& v) { c.noise = parse_double(v); }},
      {"methods",
       [](RunConfig& c, const std::string& v) {
         c.methods.clear();
         for (const auto& m : split_list(v)) c.methods.push_back(method_from_string(m));
       }},
      {"method", [](RunConfig& c, const std::string& v) { c.method = method_from_string(v); }},
      {"hidden",
       [](RunConfig& c, const std::string& v) {
         c.experiment.hidden.clear();
         for (const auto& w : split_list(v)) {
           const auto width = parse_uint(w);
           require(width > 0, "hidden widths must be positive");
           c.experiment.hidden.push_back(width);
         }
       }},
      {"learning_rate",
       [](RunConfig& c, const std::string& v) { c.experiment.train.learning_rate = parse_double(v); }},
      {"momentum",
       [](RunConfig& c, const std::string& v) { c.experiment.train.momentum = parse_double(v); }},
      {"weight_decay",
       [](RunConfig& c, const std::string& v) { c.experiment.train.weight_decay = parse_double(v); }},
      {"batch_size",
       [](RunConfig& c, const std::string& v) { c.experiment.train.batch_size = parse_uint(v); }},
      {"epochs", [](RunConfig& c, const std::string& v) { c.experiment.train.epochs = parse_int(v); }},
      {"init_std",
       [](RunConfig& c, const std::string& v) { c.experiment.train.init_std = parse_double(v); }},
      {"lr_decay",
       [](RunConfig& c, const std::string& v) { c.experiment.train.lr_decay = parse_double(v); }},
      {"lr_decay_every",
       [](RunConfig& c, const std::string& v) { c.experiment.train.lr_decay_every = parse_int(v); }},
      {"eps_ins",
       [](RunConfig& c, const std::string& v) { c.experiment.train.eps_ins = parse_double(v); }},
      {"sigma",
       [](RunConfig& c, const std::string& v) {
         if (v == "per_sample") {
           c.experiment.sigma = -1.0;
           return;
         }
         const double s = parse_double(v);
         require(s >= 0.0, "sigma must be 'per_sample' or >= 0");
         c.experiment.sigma = s;
       }},
      {"pose_sigma",
       [](RunConfig& c, const std::string& v) { c.experiment.pose_sigma = parse_double(v); }},
      {"ls_epsilon",
       [](RunConfig& c, const std::string& v) { c.experiment.ls_epsilon = parse_double(v); }},
      {"sweep_sigmas",
       [](RunConfig& c, const std::string& v) {
         c.sweep_sigmas.clear();
         for (const auto& s : split_list(v)) c.sweep_sigmas.push_back(parse_double(s));
       }},
      {"sweep_decoder",
       [](RunConfig& c, const std::string& v) {
         require(v == "max" || v == "exp", "sweep_decoder must be 'max' or 'exp'");
         c.experiment.sweep_decoder = v == "max" ? Decoder::kMax : Decoder::kExp;
       }},
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = parse_uint(v); }},
      {"out", [](RunConfig& c, const std::string& v) { c.out = v; }},
      {"format",
       [](RunConfig& c, const std::string& v) {
         require(v == "json" || v == "csv", "format must be 'json' or 'csv'");
         c.format = v;
       }},
  };
  return table;
}

}  // namespace

ExperimentConfig RunConfig::desk_scale_experiment() {
  ExperimentConfig e;
  e.train.epochs = 100;
  e.train.batch_size = 32;
  e.train.init_std = 0.1;
  return e;
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  RunConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool schema_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(where + "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) throw InputError(where + "expected 'key = value'");
    if (!seen.insert(key).second) throw InputError(where + "duplicate key '" + key + "'");
    if (!schema_seen) {
      if (key != "schema") throw InputError(where + "first key must be 'schema'");
      if (value != kConfigSchema) {
        throw InputError(where + "unsupported schema '" + value + "' (expected " +
                         kConfigSchema + ")");
      }
      schema_seen = true;
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) throw InputError(where + "unknown key '" + key + "'");
    try {
      it->second(config, value);
    } catch (const InputError& e) {
      throw InputError(where + key + ": " + e.what());
    }
  }
  if (!schema_seen) throw InputError(origin + ": missing 'schema = " + kConfigSchema + "'");
  try {
    config.resolved_experiment().train.validate();
  } catch (const InputError& e) {
    throw InputError(origin + ": " + e.what());
  }
  require(config.n_train >= 1 && config.n_val >= 1, origin + ": n_train and n_val must be >= 1");
  require(config.dim >= 2, origin + ": dim must be >= 2");
  require(!config.noise || *config.noise >= 0.0, origin + ": noise must be >= 0");
  return config;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

ExperimentConfig RunConfig::resolved_experiment() const {
  ExperimentConfig e = experiment;
  e.train.seed = seed;
  return e;
}

AgeTaskParams RunConfig::age_params() const {
  AgeTaskParams p;
  p.n_train = n_train;
  p.n_val = n_val;
  p.dim = dim;
  p.noise = noise.value_or(1.0);
  p.seed = Rng::derive(seed, 0);
  return p;
}

PoseTaskParams RunConfig::pose_params() const {
  PoseTaskParams p;
  p.n_train = n_train;
  p.n_val = n_val;
  p.dim = dim;
  p.noise = noise.value_or(0.1);
  p.seed = Rng::derive(seed, 0);
  return p;
}

io::Json RunConfig::to_json() const {
  const auto e = resolved_experiment();
  io::Json methods_json = io::Json::array();
  for (Method m : methods) methods_json.push_back(method_key(m));
  io::Json j{{"schema", kConfigSchema},
             {"task", task},
             {"n_train", n_train},
             {"n_val", n_val},
             {"dim", dim},
             {"noise", task == "age" ? age_params().noise : pose_params().noise},
             {"methods", methods_json},
             {"method", method_key(method)},
             {"hidden", e.hidden},
             {"learning_rate", e.train.learning_rate},
             {"momentum", e.train.momentum},
             {"weight_decay", e.train.weight_decay},
             {"batch_size", e.train.batch_size},
             {"epochs", e.train.epochs},
             {"init_std", e.train.init_std},
             {"lr_decay", e.train.lr_decay},
             {"lr_decay_every", e.train.lr_decay_every},
             {"eps_ins", e.train.eps_ins}};
  if (e.sigma < 0.0) {
    j["sigma"] = "per_sample";
  } else {
    j["sigma"] = e.sigma;
  }
  j["pose_sigma"] = e.pose_sigma;
  j["ls_epsilon"] = e.ls_epsilon;
  j["sweep_sigmas"] = sweep_sigmas;
  j["sweep_decoder"] = e.sweep_decoder == Decoder::kMax ? "max" : "exp";
  j["seed"] = seed;
  return j;
}

}  // namespace dldl

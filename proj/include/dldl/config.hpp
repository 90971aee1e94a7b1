#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dldl/io.hpp"
#include "dldl/synth.hpp"

namespace dldl {

inline constexpr const char* kConfigSchema = "dldl.config/1";

/// Everything a CLI run needs, read from a flat `key = value` file.
///
/// Lines are `key = value`; `#` starts a comment; blank lines are ignored.
/// The first key must be `schema = dldl.config/1`. Unknown or repeated keys
/// are rejected with their line number. List values are comma separated.
struct RunConfig {
  std::string task = "age";  // age | pose

  // generator
  std::size_t n_train = 1000;
  std::size_t n_val = 500;
  std::size_t dim = 8;
  std::optional<double> noise;  // default 1.0 for age, 0.1 for pose

  // methods: `methods` for compare, `method` for train/eval
  std::vector<Method> methods = all_methods();
  Method method = Method::kDldl;

  ExperimentConfig experiment = desk_scale_experiment();
  std::vector<double> sweep_sigmas;  // empty: {0, 0.5, ..., 3} x label step

  std::uint64_t seed = 0;
  std::string out = "out";
  std::string format = "json";

  // Desk-scale training recipe: the optimizer settings keep their published
  // values; epochs, batch size and init scale are sized for the small
  // dense networks used here.
  static ExperimentConfig desk_scale_experiment();

  static RunConfig parse(const std::string& text, const std::string& origin = "<config>");
  static RunConfig load(const std::filesystem::path& path);

  // Resolved training settings, with the top-level seed applied.
  ExperimentConfig resolved_experiment() const;
  AgeTaskParams age_params() const;
  PoseTaskParams pose_params() const;

  // Canonical echo of every setting, embedded in reports.
  io::Json to_json() const;
};

}  // namespace dldl

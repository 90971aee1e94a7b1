#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dldl/gradcheck.hpp"
#include "dldl/label_space.hpp"
#include "dldl/metrics.hpp"
#include "dldl/net.hpp"
#include "dldl/synth.hpp"

namespace dldl::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCheckpointSchema = "dldl.checkpoint/1";
inline constexpr const char* kAnnotationSchema = "dldl.annotation/1";
inline constexpr const char* kDistributionSchema = "dldl.distribution/1";
inline constexpr const char* kReportSchema = "dldl.report/1";
inline constexpr const char* kMetricsSchema = "dldl.metrics/1";
inline constexpr const char* kSweepSchema = "dldl.sweep/1";
inline constexpr const char* kHistorySchema = "dldl.history/1";
inline constexpr const char* kGradCheckSchema = "dldl.gradcheck/1";

Json to_json(const LabelSet1D& set);
LabelSet1D label_set_from_json(const Json& j);

/// Checkpoint: architecture, head, seed and parameter arrays, plus free-form
/// metadata (method, label range) needed to evaluate it later.
struct Checkpoint {
  Network net;
  std::uint64_t seed = 0;
  Json meta = Json::object();
};

Json to_json(const Checkpoint& ck);
Checkpoint checkpoint_from_json(const Json& j);

Json to_json(const MetricReport& report);
Json to_json(const ExperimentReport& report, const Json& config);
std::string report_csv(const ExperimentReport& report);
Json to_json(const std::vector<SweepPoint>& curve, const Json& config);
std::string sweep_csv(const std::vector<SweepPoint>& curve);
Json to_json(const TrainHistory& history);
std::string history_csv(const TrainHistory& history);
Json to_json(const GradCheckReport& report);

// Shortest round-trip decimal form of a double, for CSV cells.
std::string format_double(double v);

Json read_json_file(const std::filesystem::path& path);
// Writes `text` exactly; creates parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& j);

// Throws InputError unless j["schema"] == expected.
void require_schema(const Json& j, const char* expected);

}  // namespace dldl::io

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <set>
#include <algorithm>

#include <unistd.h>

#include "dldl/cli.hpp"
#include "dldl/construct.hpp"
#include "dldl/io.hpp"

using namespace dldl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("dldl_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text) const {
    const auto p = path / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kSmallConfig = R"(schema = dldl.config/1
n_train = 120
n_val = 40
hidden = 16
epochs = 3
)";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("dist age matches gaussian_1d") {
  TempDir tmp;
  const auto ann = tmp.file("ann.json", R"({"schema": "dldl.annotation/1", "kind": "age",
    "samples": [{"id": "a", "mu": 25, "sigma": 2}, {"mu": 60, "sigma": 0}]})");
  const auto r = run({"dist", ann, "--out", tmp.sub("o")});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("normalization check: 2 distributions") != std::string::npos);
  CHECK(r.out.find(": ok") != std::string::npos);
  const auto doc = io::read_json_file(tmp.sub("o") + "/distributions.json");
  CHECK(doc["schema"] == io::kDistributionSchema);
  CHECK(doc["normalization"]["ok"] == true);
  const auto mass = doc["distributions"][0]["mass"].get<std::vector<double>>();
  REQUIRE(mass.size() == 85);
  const auto expected = gaussian_1d(LabelSet1D::make_range(1, 85, 1), 25, 2);
  for (std::size_t i = 0; i < 85; ++i) CHECK(mass[i] == expected[i]);
  CHECK(doc["distributions"][0]["id"] == "a");
  CHECK(doc["distributions"][1]["mass"][59] == 1.0);

  const auto csv = run({"dist", ann, "--out", tmp.sub("c"), "--format", "csv"});
  REQUIRE(csv.code == kExitOk);
  const auto text = slurp(tmp.sub("c") + "/distributions.csv");
  CHECK(text.rfind("id,1,2,3,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("dist for the other annotation kinds") {
  TempDir tmp;
  const auto seg = tmp.file("seg.json", R"({"schema": "dldl.annotation/1", "kind": "segmentation",
    "height": 5, "width": 5, "classes": 3, "kernel": {"size": 5, "sigma": 1},
    "maps": [[0,0,1,1,1, 0,0,1,1,1, 2,2,2,2,2, 2,2,2,2,2, 2,2,2,2,2]]})");
  auto r = run({"dist", seg, "--out", tmp.sub("s")});
  REQUIRE(r.code == kExitOk);
  auto doc = io::read_json_file(tmp.sub("s") + "/distributions.json");
  CHECK(doc["kernel"]["size"] == 5);
  CHECK(doc["kernel"]["padding"] == 2);
  CHECK(doc["fields"][0]["mass"].size() == 75);
  CHECK(r.out.find("25 distributions") != std::string::npos);

  const auto pose = tmp.file("pose.json", R"({"schema": "dldl.annotation/1", "kind": "pose",
    "samples": [{"pitch": 0, "yaw": 15, "sigma": 15}]})");
  r = run({"dist", pose, "--out", tmp.sub("p")});
  REQUIRE(r.code == kExitOk);
  doc = io::read_json_file(tmp.sub("p") + "/distributions.json");
  CHECK(doc["distributions"][0]["mass"].size() == 9 * 13);

  const auto ml = tmp.file("ml.json", R"({"schema": "dldl.annotation/1", "kind": "multilabel",
    "classes": 4, "samples": [{"positive": [0], "difficult": [2]}]})");
  r = run({"dist", ml, "--out", tmp.sub("m")});
  REQUIRE(r.code == kExitOk);
  doc = io::read_json_file(tmp.sub("m") + "/distributions.json");
  const auto m = doc["distributions"][0]["mass"].get<std::vector<double>>();
  CHECK(m[0] > m[2]);
  CHECK(m[2] > m[1]);
}

TEST_CASE("input errors exit 2 with a located message") {
  TempDir tmp;
  const auto neg = tmp.file("neg.json", R"({"schema": "dldl.annotation/1", "kind": "age",
    "samples": [{"mu": 25, "sigma": -1}]})");
  auto r = run({"dist", neg, "--out", tmp.sub("o")});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("samples[0].sigma: must be >= 0") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp.sub("o") + "/distributions.json"));

  const auto kind = tmp.file("kind.json", R"({"schema": "dldl.annotation/1", "kind": "video"})");
  CHECK(run({"dist", kind}).code == kExitInput);
  const auto broken = tmp.file("broken.json", "{ not json");
  CHECK(run({"dist", broken}).code == kExitInput);

  const auto cfg = tmp.file("bad.cfg", "schema = dldl.config/1\nepochs = many\n");
  r = run({"train", "--config", cfg});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("bad.cfg:2") != std::string::npos);

  CHECK(run({"train", "--config", tmp.sub("missing.cfg")}).code == kExitInput);
  CHECK(run({"frobnicate"}).code == kExitInput);
  CHECK(run({"compare", "--format", "xml"}).code == kExitInput);
  CHECK(run({}).code == kExitInput);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("gradcheck passes") {
  const auto r = run({"gradcheck"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("<= 0.0001: PASS") != std::string::npos);
}

TEST_CASE("train then eval") {
  TempDir tmp;
  const auto cfg = tmp.file("run.cfg", kSmallConfig);
  auto r = run({"train", "--config", cfg, "--out", tmp.sub("t")});
  REQUIRE(r.code == kExitOk);
  const auto ck = io::read_json_file(tmp.sub("t") + "/checkpoint.json");
  CHECK(ck["meta"]["method"] == "dldl");
  CHECK(io::read_json_file(tmp.sub("t") + "/history.json")["epochs"].size() == 3);

  r = run({"eval", tmp.sub("t") + "/checkpoint.json", "--config", cfg, "--out", tmp.sub("e")});
  REQUIRE(r.code == kExitOk);
  const auto metrics = io::read_json_file(tmp.sub("e") + "/metrics.json");
  CHECK(metrics["rows"].size() == 2);
  const auto cs = slurp(tmp.sub("e") + "/cs_curve.csv");
  CHECK(cs.rfind("g,cs_Max,cs_Exp\n", 0) == 0);

  const auto pose = tmp.file("pose.cfg", std::string(kSmallConfig) + "task = pose\n");
  CHECK(run({"eval", tmp.sub("t") + "/checkpoint.json", "--config", pose}).code == kExitInput);
}

TEST_CASE("compare is deterministic and covers the baselines") {
  TempDir tmp;
  const auto cfg = tmp.file("run.cfg", kSmallConfig);
  REQUIRE(run({"compare", "--config", cfg, "--out", tmp.sub("a")}).code == kExitOk);
  REQUIRE(run({"compare", "--config", cfg, "--out", tmp.sub("b")}).code == kExitOk);
  CHECK(slurp(tmp.sub("a") + "/report.json") == slurp(tmp.sub("b") + "/report.json"));
  CHECK(slurp(tmp.sub("a") + "/report.csv") == slurp(tmp.sub("b") + "/report.csv"));
  const auto report = io::read_json_file(tmp.sub("a") + "/report.json");
  std::set<std::string> dldl, baselines;
  for (const auto& row : report["rows"]) {
    const auto method = row["method"].get<std::string>();
    (method == "DLDL" ? dldl : baselines).insert(method + "/" + row["loss"].get<std::string>());
  }
  CHECK(dldl.size() == 1);
  CHECK(baselines.size() >= 5);

  REQUIRE(run({"compare", "--config", cfg, "--out", tmp.sub("c"), "--seed", "5"}).code == kExitOk);
  CHECK(slurp(tmp.sub("a") + "/report.json") != slurp(tmp.sub("c") + "/report.json"));
}

TEST_CASE("sweep") {
  TempDir tmp;
  const auto cfg = tmp.file("run.cfg", std::string(kSmallConfig) + "sweep_sigmas = 0, 2\n");
  REQUIRE(run({"sweep", "--config", cfg, "--out", tmp.sub("s")}).code == kExitOk);
  const auto doc = io::read_json_file(tmp.sub("s") + "/sweep.json");
  CHECK(doc["schema"] == io::kSweepSchema);
  CHECK(slurp(tmp.sub("s") + "/sweep.csv").rfind("sigma,val_mae\n0,", 0) == 0);
  const auto pose = tmp.file("pose.cfg", std::string(kSmallConfig) + "task = pose\n");
  CHECK(run({"sweep", "--config", pose}).code == kExitInput);
}

}

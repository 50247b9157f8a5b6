#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fdgmaa/cli.hpp"
#include "fdgmaa/harness.hpp"
#include "fdgmaa/serialization.hpp"

using namespace fdgmaa;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / "fdgmaa_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  std::string config(const Json& j) const {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump();
    return p.string();
  }
};

Json small() {
  return {{"n", 5},      {"d", 3},     {"samples_per_node", 4},
          {"lambda", 0.1}, {"period", 2}, {"memory", 3},
          {"iters", 10}};
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "fdgmaa_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

}  // namespace

TEST_CASE("run writes traces, instance and constants") {
  Workspace ws;
  const std::string cfg = ws.config(small());
  const fs::path out = ws.dir / "out";
  std::string text;
  REQUIRE(cli({"run", "--config", cfg, "--out", out.string()}, &text) == 0);
  for (const char* f : {"fdgm.csv", "fdgm_aa.csv", "dps.csv", "instance.json", "constants.json"}) {
    CHECK(fs::exists(out / f));
  }
  CHECK(read_csv((out / "fdgm_aa.csv").string()).size() == 11);
  const Json inst = read_json_file((out / "instance.json").string());
  CHECK(instance_from_json(inst.at("instance")).n == 5);
  CHECK(schedule_from_json(inst.at("schedule")).period() == 2);
  const Json rc = read_json_file((out / "constants.json").string());
  CHECK(rc.at("B") == 2);
  CHECK(rc.at("R0_estimate").get<double>() > 0.0);
}

TEST_CASE("verify reports passing audits") {
  Workspace ws;
  std::string text;
  CHECK(cli({"--serial", "verify", "--config", ws.config(small())}, &text) == 0);
  CHECK(text.find("FAIL") == std::string::npos);
  CHECK(text.find("PASS fdgm_aa accumulated descent") != std::string::npos);
}

TEST_CASE("sweep writes a summary per value") {
  Workspace ws;
  Json j = small();
  j["algorithms"] = {"fdgm_aa"};
  const fs::path out = ws.dir / "sweep";
  std::string text;
  CHECK(cli({"sweep", "--config", ws.config(j), "--param", "memory", "--values", "1", "3", "--out",
             out.string()},
            &text) == 0);
  std::ifstream summary(out / "sweep_memory.csv");
  std::string line;
  int lines = 0;
  while (std::getline(summary, line)) ++lines;
  CHECK(lines == 3);
  CHECK(text.find("best memory for fdgm_aa") != std::string::npos);
  CHECK(cli({"sweep", "--config", ws.config(j), "--param", "colour", "--values", "1"}) == 2);
  CHECK(cli({"sweep", "--config", ws.config(j), "--param", "memory", "--values", "-1"}) == 2);
}

TEST_CASE("bad input exits with code 2") {
  Workspace ws;
  CHECK(cli({"run", "--config", (ws.dir / "missing.json").string()}) == 2);
  Json j = small();
  j["colour"] = "blue";
  CHECK(cli({"run", "--config", ws.config(j)}) == 2);
  j = small();
  j["lambda"] = -1.0;
  CHECK(cli({"verify", "--config", ws.config(j)}) == 2);
  std::ofstream(ws.dir / "broken.json") << "{";
  CHECK(cli({"verify", "--config", (ws.dir / "broken.json").string()}) == 2);
  CHECK(cli({"frobnicate"}) == 2);
  CHECK(cli({}) == 2);
}

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qslab/scenarios.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(QSLAB_EXE) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qslab-test-cli-" + name);
  fs::remove_all(p);
  return p;
}

std::string config(const char* name) { return std::string(QSLAB_CONFIGS) + "/" + name; }
std::string data(const char* name) { return std::string(QSLAB_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("run free-isometry") {
  const fs::path out = scratch("free");
  const Result r = cli("run " + config("free-isometry.json") + " -o " + out.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("[PASS] free-isometry/hs-isometry") != std::string::npos);

  std::ifstream in(out / "norms.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,l2,hs,weighted_l2_m2,cube_sup,ratio");
  int rows = 0;
  for (std::string line; std::getline(in, line); ++rows) {
    const double ratio = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(rows > 10);

  const json m = qslab::read_json(out / "manifest.json");
  CHECK(m["scenario"] == "free-isometry");
  CHECK(m["passed"] == true);
  CHECK(cli("verify " + out.string()).code == 0);
  fs::remove_all(out);
}

TEST_CASE("doi-pipeline on the trapping well is refused") {
  const fs::path out = scratch("trapped");
  const Result r = cli("run " + config("doi-trapped.json") + " -o " + out.string());
  CHECK(r.code == 1);
  CHECK(r.out.find("REFUSED") != std::string::npos);
  const json c = qslab::read_json(out / "criteria.json");
  CHECK(c["refused"] == true);
  bool recorded = false;
  for (const auto& item : c["criteria"])
    if (item["id"] == "refusal") recorded = item["detail"].contains("reason");
  CHECK(recorded);
  CHECK(cli("verify " + out.string()).code == 1);
  fs::remove_all(out);
}

TEST_CASE("usage errors exit 2") {
  const fs::path out = scratch("bad");
  CHECK(cli("run " + data("malformed.json") + " -o " + out.string()).code == 2);
  CHECK(cli("run " + data("unknown-param.json") + " -o " + out.string()).code == 2);
  CHECK(cli("run " + data("does-not-exist.json") + " -o " + out.string()).code == 2);
  CHECK(cli("bogus").code == 2);
  CHECK(cli("").code == 2);
  CHECK(cli("list --lecture 9").code == 2);
  CHECK(cli("verify " + scratch("nothing").string()).code == 2);
  CHECK_FALSE(fs::exists(out / "manifest.json"));
}

TEST_CASE("list") {
  const Result text = cli("list");
  CHECK(text.code == 0);
  CHECK(std::count(text.out.begin(), text.out.end(), '\n') >= 12);
  CHECK(text.out.find("smoothing-sweep") != std::string::npos);

  const Result js = cli("list --json");
  REQUIRE(js.code == 0);
  const json cat = json::parse(js.out);
  CHECK(cat.size() == qslab::scenarios::catalog().size());

  const json five = json::parse(cli("list --lecture 5 --json").out);
  REQUIRE_FALSE(five.empty());
  std::set<std::string> ids;
  for (const auto& s : five) {
    CHECK(s["lecture"] == 5);
    ids.insert(s["id"].get<std::string>());
  }
  CHECK(ids.count("doi-pipeline") == 1);
  CHECK(ids.count("free-isometry") == 0);
}

TEST_CASE("batch run with jobs") {
  const fs::path cfg_dir = scratch("batch-config");
  fs::create_directories(cfg_dir);
  std::ofstream(cfg_dir / "batch.json")
      << R"({"seed": 4, "scenarios": ["symmetrizer", {"scenario": "free-isometry", "params": {"N": 128}}, "symmetrizer"]})";
  const fs::path out = scratch("batch");
  const Result r = cli("run " + (cfg_dir / "batch.json").string() + " -j 2 -o " + out.string());
  CHECK(r.code == 0);
  const json m = qslab::read_json(out / "manifest.json");
  CHECK(m["passed"] == true);
  REQUIRE(m["runs"].size() == 3);
  CHECK(m["runs"][2]["dir"] == "symmetrizer-2");
  CHECK(fs::exists(out / "symmetrizer-2" / "criteria.json"));
  CHECK(cli("verify " + out.string()).code == 0);

  std::ofstream(out / "free-isometry" / "criteria.json") << R"({"criteria": []})";
  CHECK(cli("verify " + out.string()).code == 1);
  fs::remove_all(out);
  fs::remove_all(cfg_dir);
}

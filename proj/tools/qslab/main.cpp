#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "qslab/scenarios.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
namespace sc = qslab::scenarios;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

fs::path output_root(const std::string& flag, const fs::path& config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("QSLAB_OUTPUT_DIR"); env && *env) return env;
  return fs::path("qslab-out") / config.stem();
}

void print_outcome(const sc::Outcome& o) {
  for (const auto& c : o.criteria)
    std::printf("[%s] %s/%s: %s (value %.6g, threshold %.6g)\n", c.pass ? "PASS" : "FAIL", o.id.c_str(), c.id.c_str(),
                c.description.c_str(), c.value, c.threshold);
  std::printf("%s %s\n", o.id.c_str(), o.refused ? "REFUSED" : (o.passed ? "passed" : "FAILED"));
}

int cmd_run(const std::string& config_path, const std::string& out_flag, int jobs) {
  json config;
  std::vector<json> entries;
  try {
    std::ifstream in(config_path);
    if (!in) throw sc::ConfigError("cannot open config " + config_path);
    config = json::parse(in);
    entries = sc::expand(config);
  } catch (const json::exception& e) {
    std::fprintf(stderr, "qslab: malformed config: %s\n", e.what());
    return kExitUsage;
  } catch (const sc::ConfigError& e) {
    std::fprintf(stderr, "qslab: %s\n", e.what());
    return kExitUsage;
  }
  const fs::path root = output_root(out_flag, config_path);
  const bool multi = config.contains("scenarios");
  std::vector<fs::path> dirs;
  std::map<std::string, int> seen;
  for (const auto& e : entries) {
    const std::string id = e["scenario"];
    const int k = ++seen[id];
    dirs.push_back(multi ? root / (k == 1 ? id : id + "-" + std::to_string(k)) : root);
  }
  std::vector<sc::Outcome> outcomes(entries.size());
  std::vector<std::string> errors(entries.size());
  std::atomic<std::size_t> next{0};
  std::mutex print_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        outcomes[i] = sc::run(entries[i], dirs[i]);
        std::lock_guard lock(print_mutex);
        print_outcome(outcomes[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(entries.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) {
      std::fprintf(stderr, "qslab: %s\n", errors[i].c_str());
      return kExitUsage;
    }
  bool all = true;
  for (const auto& o : outcomes) all = all && o.passed;
  if (multi) {
    json runs = json::array();
    for (std::size_t i = 0; i < entries.size(); ++i)
      runs.push_back({{"scenario", outcomes[i].id},
                      {"dir", dirs[i].filename().string()},
                      {"passed", outcomes[i].passed},
                      {"refused", outcomes[i].refused}});
    std::ofstream(root / "manifest.json") << json{{"tool_version", sc::tool_version()}, {"passed", all}, {"runs", runs}}.dump(2)
                                          << '\n';
  }
  std::printf("output: %s\n", root.string().c_str());
  return all ? 0 : kExitFail;
}

int cmd_list(std::optional<int> lecture, bool as_json) {
  const json cat = sc::catalog_json(lecture);
  if (as_json) {
    std::cout << cat.dump(2) << '\n';
    return 0;
  }
  for (const auto& s : cat)
    std::printf("%-20s L%d  %s\n", s["id"].get<std::string>().c_str(), s["lecture"].get<int>(),
                s["anchor"].get<std::string>().c_str());
  return 0;
}

int cmd_verify(const std::string& dir) {
  try {
    const sc::VerifyReport r = sc::verify(dir);
    for (const auto& p : r.problems) std::printf("%s\n", p.c_str());
    std::printf("%s: %s, %s\n", dir.c_str(), r.consistent ? "consistent" : "inconsistent",
                r.passed ? "all criteria pass" : "criteria failing");
    return r.consistent && r.passed ? 0 : kExitFail;
  } catch (const sc::ConfigError& e) {
    std::fprintf(stderr, "qslab: %s\n", e.what());
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qslab: numerical laboratory for quasilinear Schroedinger estimates"};
  app.require_subcommand(1);

  std::string config, out;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run the scenario(s) described by a JSON config");
  run->add_option("config", config, "Config file")->required();
  run->add_option("-o,--output", out, "Output directory");
  run->add_option("-j,--jobs", jobs, "Concurrent scenarios")->check(CLI::PositiveNumber);

  int lecture = 0;
  bool as_json = false;
  auto* list = app.add_subcommand("list", "List scenarios");
  list->add_option("--lecture", lecture, "Only scenarios anchored in this lecture")->check(CLI::Range(1, 6));
  list->add_flag("--json", as_json, "Machine-readable catalog");

  std::string dir;
  auto* verify = app.add_subcommand("verify", "Check an output directory against its manifest");
  verify->add_option("dir", dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  try {
    if (*run) return cmd_run(config, out, jobs);
    if (*list) return cmd_list(lecture ? std::optional<int>(lecture) : std::nullopt, as_json);
    return cmd_verify(dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qslab: %s\n", e.what());
    return kExitUsage;
  }
}

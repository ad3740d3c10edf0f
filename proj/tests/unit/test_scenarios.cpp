#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "qslab/scenarios.hpp"

namespace sc = qslab::scenarios;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qslab-test-scenarios-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json small_free() {
  return {{"scenario", "free-isometry"}, {"seed", 7}, {"params", {{"N", 128}, {"count", 3}}}};
}

}  // namespace

TEST_CASE("catalog covers the required scenario set") {
  const auto& cat = sc::catalog();
  CHECK(cat.size() >= 12);
  const std::set<std::string> required{"free-isometry",  "viscous-smoothing", "energy-budget", "picard-semilinear",
                                       "bona-smith",     "qlcp-eps-sweep",    "psido-calculus", "garding",
                                       "weighted-bounds", "flow-conservation", "nontrap-scan",  "doi-pipeline",
                                       "gauge-invertibility", "smoothing-sweep", "kato-half",   "maximal",
                                       "mizohata",       "ichinose",          "symmetrizer",   "mst-witness",
                                       "commutator"};
  std::set<std::string> ids;
  for (const auto& s : cat) {
    CHECK_MESSAGE(ids.insert(s.id).second, "duplicate id ", s.id);
    CHECK(s.lecture >= 1);
    CHECK(s.lecture <= 6);
    CHECK_FALSE(s.anchor.empty());
    CHECK(s.body != nullptr);
    CHECK(s.defaults.is_object());
  }
  for (const auto& id : required) CHECK_MESSAGE(ids.count(id) == 1, "missing ", id);

  std::set<int> covered;
  for (const auto& s : cat) covered.insert(s.acceptance.begin(), s.acceptance.end());
  for (int a = 1; a <= 19; ++a) CHECK_MESSAGE(covered.count(a) == 1, "acceptance ", a, " has no scenario");

  CHECK(sc::find("kato-half") != nullptr);
  CHECK(sc::find("no-such") == nullptr);
}

TEST_CASE("lecture filter") {
  const json all = sc::catalog_json();
  CHECK(all.size() == sc::catalog().size());
  std::size_t total = 0;
  for (int l = 1; l <= 6; ++l) {
    const json part = sc::catalog_json(l);
    for (const auto& s : part) CHECK(s["lecture"] == l);
    total += part.size();
  }
  CHECK(total == all.size());
  const json five = sc::catalog_json(5);
  std::set<std::string> ids;
  for (const auto& s : five) ids.insert(s["id"].get<std::string>());
  CHECK(ids.count("doi-pipeline") == 1);
  CHECK(ids.count("gauge-invertibility") == 1);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(sc::validate(small_free()));
  CHECK_NOTHROW(sc::validate(json{{"scenario", "maximal"}}));
  CHECK_THROWS_AS(sc::validate(json{{"scenario", "no-such"}}), sc::ConfigError);
  CHECK_THROWS_AS(sc::validate(json{{"params", json::object()}}), sc::ConfigError);
  CHECK_THROWS_AS(sc::validate(json{{"scenario", "maximal"}, {"params", {{"bogus", 1}}}}), sc::ConfigError);
  CHECK_THROWS_AS(sc::validate(json{{"scenario", "maximal"}, {"params", {{"N", "many"}}}}), sc::ConfigError);
  CHECK_THROWS_AS(sc::validate(json{{"scenario", "maximal"}, {"seed", "x"}}), sc::ConfigError);
  CHECK_THROWS_AS(sc::expand(json::array()), sc::ConfigError);
}

TEST_CASE("expand batch configs") {
  const auto single = sc::expand(small_free());
  REQUIRE(single.size() == 1);
  CHECK(single[0] == small_free());

  const json batch{{"seed", 3}, {"scenarios", {"maximal", small_free()}}};
  const auto entries = sc::expand(batch);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0]["scenario"] == "maximal");
  CHECK(entries[0]["seed"] == 3);
  CHECK(entries[1]["seed"] == 7);

  CHECK_THROWS_AS(sc::expand(json{{"scenarios", json::array()}}), sc::ConfigError);
  CHECK_THROWS_AS(sc::expand(json{{"scenarios", {"maximal"}}, {"extra", 1}}), sc::ConfigError);
  CHECK_THROWS_AS(sc::expand(json{{"scenarios", {"maximal", "no-such"}}}), sc::ConfigError);
}

TEST_CASE("run writes a consistent, deterministic output directory") {
  const fs::path a = scratch("a"), b = scratch("b");
  const sc::Outcome oa = sc::run(small_free(), a);
  const sc::Outcome ob = sc::run(small_free(), b);
  CHECK(oa.passed);
  CHECK_FALSE(oa.refused);
  REQUIRE_FALSE(oa.criteria.empty());
  CHECK(oa.criteria[0].acceptance == 1);

  for (const char* f : {"manifest.json", "criteria.json", "norms.csv"}) CHECK(fs::exists(a / f));
  const json m = qslab::read_json(a / "manifest.json");
  CHECK(m["scenario"] == "free-isometry");
  CHECK(m["anchor"] == sc::find("free-isometry")->anchor);
  CHECK(m["seed"] == 7);
  CHECK(m["config"]["params"]["N"] == 128);
  CHECK(m["config"]["params"]["s"] == sc::find("free-isometry")->defaults["s"]);
  CHECK(m["tool_version"] == sc::tool_version());
  CHECK(m["wall_time_seconds"].get<double>() >= 0.0);

  for (const auto& f : m["files"]) CHECK(slurp(a / f.get<std::string>()) == slurp(b / f.get<std::string>()));
  json ma = m, mb = qslab::read_json(b / "manifest.json");
  ma.erase("wall_time_seconds");
  mb.erase("wall_time_seconds");
  CHECK(ma == mb);

  const sc::VerifyReport r = sc::verify(a);
  CHECK(r.consistent);
  CHECK(r.passed);

  json other = small_free();
  other["seed"] = 8;
  const fs::path c = scratch("c");
  sc::run(other, c);
  CHECK(slurp(a / "norms.csv") != slurp(c / "norms.csv"));

  for (const auto& p : {a, b, c}) fs::remove_all(p);
}

TEST_CASE("verify detects tampering") {
  const fs::path a = scratch("tamper");
  sc::run(small_free(), a);
  fs::remove(a / "norms.csv");
  sc::VerifyReport r = sc::verify(a);
  CHECK_FALSE(r.consistent);
  CHECK_FALSE(r.passed);

  sc::run(small_free(), a);
  json c = qslab::read_json(a / "criteria.json");
  c["criteria"][0]["pass"] = false;
  std::ofstream(a / "criteria.json") << c.dump();
  r = sc::verify(a);
  CHECK_FALSE(r.consistent);
  CHECK_FALSE(r.problems.empty());

  CHECK_THROWS_AS(sc::verify(scratch("empty")), sc::ConfigError);
  fs::remove_all(a);
}

TEST_CASE("failing and refused runs are recorded") {
  const fs::path a = scratch("refused");
  const sc::Outcome o = sc::run(json{{"scenario", "doi-pipeline"}, {"params", {{"symbols", "annular-well"}}}}, a);
  CHECK(o.refused);
  CHECK_FALSE(o.passed);
  const json c = qslab::read_json(a / "criteria.json");
  CHECK(c["refused"] == true);
  CHECK(c["passed"] == false);
  const sc::VerifyReport r = sc::verify(a);
  CHECK(r.consistent);
  CHECK_FALSE(r.passed);

  const fs::path b = scratch("fails");
  const sc::Outcome f = sc::run(json{{"scenario", "drift-smoothing"}, {"params", {{"constant_min_growth", 1e6}}}}, b);
  CHECK_FALSE(f.passed);
  CHECK_FALSE(f.refused);
  CHECK(sc::verify(b).consistent);
  fs::remove_all(a);
  fs::remove_all(b);
}

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "qslab/io.hpp"

using namespace qslab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qslab-test-io-" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::vector<std::string>> read_rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("output directory indexes its files") {
  const fs::path root = scratch("index");
  OutputDir out(root / "nested");
  CHECK(fs::is_directory(root / "nested"));
  out.write("a.txt", [](std::ostream& o) { o << "alpha\n"; });
  out.write_json("sub/b.json", {{"x", 1}});
  out.write("a.txt", [](std::ostream& o) { o << "again\n"; });
  CHECK(out.files() == std::vector<std::string>{"a.txt", "sub/b.json"});
  CHECK(read_json(root / "nested" / "sub" / "b.json")["x"] == 1);
  std::ifstream in(root / "nested" / "a.txt");
  std::string line;
  std::getline(in, line);
  CHECK(line == "again");
  fs::remove_all(root);
}

TEST_CASE("evolution record export") {
  const fs::path root = scratch("record");
  const Grid g = make_grid(1, 8.0, 128);
  const GridFunction u0 = oracle::random_smooth(g, 5, 0.3);
  EvolutionRecord rec = free_record(u0, 1.0, 20, 1.0);
  rec.metadata["solver"] = "free";
  OutputDir out(root);
  out.write_record(rec, "free/");
  CHECK(out.files() == std::vector<std::string>{"free/norms.csv", "free/run.json"});

  const auto rows = read_rows(root / "free" / "norms.csv");
  REQUIRE(rows.size() == 22);
  CHECK(rows[0] == std::vector<std::string>{"t", "l2", "hs", "weighted_l2_m2", "cube_sup"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 5);
    CHECK(std::stod(rows[i][0]) == doctest::Approx((i - 1) / 20.0).epsilon(1e-15));
    CHECK(std::stod(rows[i][1]) == doctest::Approx(l2_norm(u0)).epsilon(1e-12));
    CHECK(std::stod(rows[i][2]) == doctest::Approx(hs_norm(u0, 1.0)).epsilon(1e-12));
  }

  const auto meta = read_json(root / "free" / "run.json");
  CHECK(meta["solver"] == "free");
  CHECK(meta["status"] == "ok");
  CHECK(meta["s"] == 1.0);
  CHECK(meta["samples"] == 21);
  CHECK(meta["grid"] == to_json(g));
  fs::remove_all(root);
}

TEST_CASE("estimate entries carry grid provenance") {
  const Grid g = make_grid(2, 3.0, 32);
  const auto e = estimate_json("maximal", {{"T", 1.0}}, 2.5, g);
  CHECK(e["functional"] == "maximal");
  CHECK(e["parameters"]["T"] == 1.0);
  CHECK(e["value"] == 2.5);
  CHECK(e["grid"]["dim"] == 2);
  CHECK(e["grid"]["half_width"] == 3.0);
  CHECK(e["grid"]["points_per_axis"] == 32);
}

TEST_CASE("read_json failures") {
  CHECK_THROWS_AS(read_json(scratch("missing") / "none.json"), Error);
  const fs::path root = scratch("bad");
  fs::create_directories(root);
  std::ofstream(root / "bad.json") << "{ not json";
  CHECK_THROWS_AS(read_json(root / "bad.json"), nlohmann::json::parse_error);
  fs::remove_all(root);
}

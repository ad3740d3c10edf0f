#include "qslab/io.hpp"

#include <algorithm>
#include <fstream>

namespace qslab {

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

void OutputDir::write(const std::string& name, const std::function<void(std::ostream&)>& body) {
  const auto path = root_ / name;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  body(out);
  if (!out) throw Error("write failed for " + path.string());
  if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
}

void OutputDir::write_json(const std::string& name, const nlohmann::json& value) {
  write(name, [&](std::ostream& out) { out << value.dump(2) << '\n'; });
}

void OutputDir::write_record(const EvolutionRecord& record, const std::string& prefix) {
  write(prefix + "norms.csv", [&](std::ostream& out) { write_norms_csv(out, record); });
  write_json(prefix + "run.json", to_json(record));
}

nlohmann::json to_json(const Grid& grid) {
  return {{"dim", grid.dim()}, {"half_width", grid.half_width()}, {"points_per_axis", grid.points_per_axis()}};
}

nlohmann::json estimate_json(const std::string& functional, const nlohmann::json& parameters, double value,
                             const Grid& grid) {
  return {{"functional", functional}, {"parameters", parameters}, {"value", value}, {"grid", to_json(grid)}};
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return nlohmann::json::parse(in);
}

}  // namespace qslab

#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qslab/evolve.hpp"
#include "qslab/grid.hpp"

namespace qslab {

/// Output directory that indexes every file written through it.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  const std::vector<std::string>& files() const noexcept { return files_; }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body);
  void write_json(const std::string& name, const nlohmann::json& value);
  /// norms.csv (under `prefix`) plus a run.json manifest for the record.
  void write_record(const EvolutionRecord& record, const std::string& prefix = "");

 private:
  std::filesystem::path root_;
  std::vector<std::string> files_;
};

/// Estimate entry: functional name, parameters, value, grid provenance.
nlohmann::json estimate_json(const std::string& functional, const nlohmann::json& parameters, double value,
                             const Grid& grid);

nlohmann::json to_json(const Grid& grid);

nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace qslab

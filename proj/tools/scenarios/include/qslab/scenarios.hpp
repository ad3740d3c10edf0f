#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qslab/io.hpp"

namespace qslab::scenarios {

/// Raised for unknown scenarios and invalid or malformed parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Criterion {
  std::string id;
  /// Acceptance criterion number, 0 when the check is scenario-local.
  int acceptance = 0;
  std::string description;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  nlohmann::json detail = nlohmann::json::object();
};

class Context {
 public:
  Context(const nlohmann::json& params, std::uint64_t seed, OutputDir& out) : params_(params), seed_(seed), out_(out) {}

  const nlohmann::json& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  OutputDir& out() noexcept { return out_; }
  std::mt19937_64 rng(std::uint64_t stream = 0) const { return std::mt19937_64(seed_ * 1000003ULL + stream); }

  double num(const char* key) const;
  int integer(const char* key) const;
  std::vector<double> list(const char* key) const;
  std::string text(const char* key) const;

  /// Records a check; returns `pass`.
  bool check(std::string id, int acceptance, std::string description, bool pass, double value, double threshold,
             nlohmann::json detail = nlohmann::json::object());

  nlohmann::json& summary() noexcept { return summary_; }
  const std::vector<Criterion>& criteria() const noexcept { return criteria_; }
  bool refused = false;

 private:
  const nlohmann::json& params_;
  std::uint64_t seed_;
  OutputDir& out_;
  nlohmann::json summary_ = nlohmann::json::object();
  std::vector<Criterion> criteria_;
};

using Body = void (*)(Context&);

struct Scenario {
  std::string id;
  int lecture = 0;
  std::string anchor;
  std::string summary;
  std::vector<int> acceptance;
  nlohmann::json defaults;
  Body body = nullptr;
};

const std::vector<Scenario>& catalog();
const Scenario* find(std::string_view id);
nlohmann::json catalog_json(std::optional<int> lecture = std::nullopt);

struct Outcome {
  std::string id;
  bool passed = false;
  bool refused = false;
  std::vector<Criterion> criteria;
  nlohmann::json manifest;
};

/// Runs one scenario entry {"scenario": id, "seed": n, "params": {...}} into `dir`.
/// Throws ConfigError for unknown scenarios and invalid parameters.
Outcome run(const nlohmann::json& entry, const std::filesystem::path& dir);

/// Expands a config document into scenario entries: either a single entry or
/// {"scenarios": [entry, ...], "seed": n}.
std::vector<nlohmann::json> expand(const nlohmann::json& config);

/// Validates a config without running it.
void validate(const nlohmann::json& entry);

struct VerifyReport {
  bool consistent = true;
  bool passed = true;
  std::vector<std::string> problems;
};

/// Checks manifest.json, the file index and criteria.json under `dir` (recursing
/// into runs listed by a top-level manifest).
VerifyReport verify(const std::filesystem::path& dir);

nlohmann::json to_json(const Criterion& c);

std::string tool_version();

// Scenario bodies.
void free_isometry(Context&);
void viscous_smoothing(Context&);
void energy_budget(Context&);
void picard_semilinear(Context&);
void bona_smith(Context&);
void qlcp_eps_sweep(Context&);
void psido_calculus(Context&);
void garding(Context&);
void weighted_bounds(Context&);
void commutator(Context&);
void symmetrizer(Context&);
void flow_conservation(Context&);
void nontrap_scan(Context&);
void doi_pipeline(Context&);
void gauge_invertibility(Context&);
void ichinose(Context&);
void smoothing_sweep(Context&);
void kato_half(Context&);
void maximal(Context&);
void mizohata(Context&);
void drift_smoothing(Context&);
void mst_witness(Context&);

}  // namespace qslab::scenarios

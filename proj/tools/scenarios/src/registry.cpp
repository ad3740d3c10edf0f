#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>

#include "qslab/doi.hpp"
#include "qslab/scenarios.hpp"

namespace qslab::scenarios {

namespace {

using nlohmann::json;

const json& param(const json& params, const char* key) {
  auto it = params.find(key);
  if (it == params.end()) throw ConfigError(std::string("missing parameter '") + key + "'");
  return *it;
}

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return true;
  return a.type() == b.type();
}

json resolve(const Scenario& s, const json& entry) {
  json merged = s.defaults;
  if (auto it = entry.find("params"); it != entry.end()) {
    if (!it->is_object()) throw ConfigError("'params' must be an object");
    for (const auto& [key, value] : it->items()) {
      auto d = s.defaults.find(key);
      if (d == s.defaults.end()) throw ConfigError("scenario " + s.id + ": unknown parameter '" + key + "'");
      if (!same_kind(*d, value)) throw ConfigError("scenario " + s.id + ": parameter '" + key + "' has the wrong type");
      if (value.is_array())
        for (const auto& v : value)
          if (!v.is_number()) throw ConfigError("scenario " + s.id + ": parameter '" + key + "' must list numbers");
      merged[key] = value;
    }
  }
  return merged;
}

std::uint64_t entry_seed(const json& entry) {
  auto it = entry.find("seed");
  if (it == entry.end()) return 1;
  const bool ok = it->is_number_unsigned() || (it->is_number_integer() && it->get<std::int64_t>() >= 0);
  if (!ok) throw ConfigError("'seed' must be a nonnegative integer");
  return it->get<std::uint64_t>();
}

const Scenario& lookup(const json& entry) {
  if (!entry.is_object()) throw ConfigError("scenario entry must be an object");
  for (const auto& [key, value] : entry.items())
    if (key != "scenario" && key != "seed" && key != "params") throw ConfigError("unknown config key '" + key + "'");
  auto it = entry.find("scenario");
  if (it == entry.end() || !it->is_string()) throw ConfigError("config needs a string 'scenario'");
  const Scenario* s = find(it->get<std::string>());
  if (!s) throw ConfigError("unknown scenario '" + it->get<std::string>() + "'");
  return *s;
}

}  // namespace

double Context::num(const char* key) const {
  const json& v = param(params_, key);
  if (!v.is_number()) throw ConfigError(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

int Context::integer(const char* key) const {
  const json& v = param(params_, key);
  if (!v.is_number_integer()) throw ConfigError(std::string("parameter '") + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> Context::list(const char* key) const {
  const json& v = param(params_, key);
  if (!v.is_array()) throw ConfigError(std::string("parameter '") + key + "' must be an array");
  return v.get<std::vector<double>>();
}

std::string Context::text(const char* key) const {
  const json& v = param(params_, key);
  if (!v.is_string()) throw ConfigError(std::string("parameter '") + key + "' must be a string");
  return v.get<std::string>();
}

bool Context::check(std::string id, int acceptance, std::string description, bool pass, double value,
                    double threshold, nlohmann::json detail) {
  criteria_.push_back({std::move(id), acceptance, std::move(description), pass, value, threshold, std::move(detail)});
  return pass;
}

nlohmann::json to_json(const Criterion& c) {
  json j = {{"id", c.id},       {"description", c.description}, {"pass", c.pass},
            {"value", c.value}, {"threshold", c.threshold}};
  if (c.acceptance) j["acceptance"] = c.acceptance;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

std::string tool_version() { return "0.1.0"; }

const std::vector<Scenario>& catalog() {
  static const std::vector<Scenario> list = {
      {"free-isometry", 2, "Lecture 2: free evolution preserves every H^s norm",
       "H^s ratio of the free flow over random data", {1},
       {{"L", 12.566370614359172}, {"N", 1024}, {"count", 20}, {"s", 2.0}, {"t_max", 2.0}, {"t_step", 0.1}},
       free_isometry},
      {"viscous-smoothing", 1, "Lecture 1 Step 2: the semigroup estimate for Delta exp(-eps t Delta^2)",
       "sqrt(eps t) ||Delta e^{-eps t Delta^2} u0|| / ||u0||", {2},
       {{"L", 12.566370614359172}, {"N", 512}, {"count", 20}, {"eps", 0.1}, {"t_max", 2.0}, {"t_count", 200}},
       viscous_smoothing},
      {"energy-budget", 1, "Lecture 1 Step 1: T0 = min{1/2C, 1/(C 4^alpha ||u0||^(2 alpha - 2))}",
       "f1(t) <= 4 ||u0||^2 on [0, T0] for G = u^2 conj(u)", {3},
       {{"L", 6.283185307179586}, {"N", 128}, {"s", 2.0}, {"u0_norm", 0.5}, {"eps", 0.1}, {"dt", 0.002}},
       energy_budget},
      {"picard-semilinear", 1, "Lecture 1 Step 2: contraction of the viscous Duhamel map",
       "adaptive Picard windows, uniqueness under perturbed starts", {},
       {{"L", 6.283185307179586}, {"N", 128}, {"s", 2.0}, {"amplitude", 0.5}, {"eps", 0.1}, {"T", 0.2}, {"dt", 0.001},
        {"perturbation", 0.1}},
       picard_semilinear},
      {"bona-smith", 1, "Lecture 1 Step 4: regularized data u0^delta = phi_delta * u0",
       "H^{k+1} growth and L^2 convergence rate of the Bona-Smith regularization", {6},
       {{"L", 12.566370614359172}, {"N", 4096}, {"k", 3}, {"excess", 0.1}, {"deltas", {0.2, 0.1, 0.05}}},
       bona_smith},
      {"qlcp-eps-sweep", 6, "Lecture 6: (IVP)_eps solved by Picard iteration, eps -> 0",
       "1D quasilinear family a = 1 + kappa |u|^2: contraction, dt halving, vanishing viscosity", {4, 5},
       {{"L", 6.283185307179586}, {"N", 128}, {"kappa", 0.5}, {"amplitude", 0.4}, {"T", 0.2}, {"dt", 0.001},
        {"eps_values", {0.4, 0.2, 0.1, 0.05, 0.025}}, {"eps_contraction", 0.1}},
       qlcp_eps_sweep},
      {"psido-calculus", 1, "Theorems 1.2 and 1.3: composition and adjoint expansions; parametrix",
       "K-term residual operator norms on the band |xi| >= 8", {7},
       {{"L", 25.132741228718345}, {"N", 1024}, {"band", 8.0}, {"R_values", {8.0, 16.0}}, {"parametrix_terms", 2}},
       psido_calculus},
      {"garding", 2, "Theorem 2.5 (sharp Garding): Re <Psi_a f, f> >= -C ||f||^2_{H^{(m-1)/2}}",
       "defect constant for a = (1 + sin x) xi^2 over N", {8},
       {{"L", 6.283185307179586}, {"N_values", {128, 256, 512}}, {"tolerance", 0.25}},
       garding},
      {"weighted-bounds", 2, "Theorems 2.7 and 2.8: S^0 operators on L^2(lambda_m dx) and cube norms",
       "operator-norm surrogates under N -> 2N for three order-0 symbols", {9},
       {{"L_weighted", 25.132741228718345}, {"N_weighted", 256}, {"L_cube", 16.0}, {"N_cube", 512}, {"m", 2.0},
        {"tolerance", 0.15}},
       weighted_bounds},
      {"flow-conservation", 4, "Lecture 4: Hamilton-Jacobi flow, H_h h = 0, pinching and homogeneity",
       "RK4 bicharacteristics: conservation, pinch, homogeneity, order", {10},
       {{"amplitude", 0.5}, {"ds", 0.001}, {"s_max", 10.0}, {"seeds", 16}},
       flow_conservation},
      {"nontrap-scan", 5, "Lecture 5 lemma and Problem 5.5: uniform non-trapping",
       "escape classification for flat 1D, annular well and free metrics", {11},
       {{"mu", 10.0}, {"seeds", 32}, {"r0", 2.0}, {"s_cap", 200.0}, {"ds", 0.01}},
       nontrap_scan},
      {"doi-pipeline", 5, "Lecture 5: Doi's escape function p with H_h p >= B|xi|/<x>^2 - 1/B",
       "q1, q2, q, p construction and positivity scan", {12},
       {{"symbols", "free,variable-1d"}, {"M", 4.0}, {"extent", 8.0}, {"xi_min", 1.0}, {"xi_max", 8.0}, {"n", 64},
        {"b_floor", 1e-4}},
       doi_pipeline},
      {"gauge-invertibility", 5, "Lecture 5 Step 3 / proof of Theorem 2.9: c_R = exp(-theta_R p)",
       "||Psi_{c_R} Psi_{c_R^+} - I|| on the band as R grows", {13},
       {{"L", 12.566370614359172}, {"N", 1024}, {"R_values", {8.0, 32.0}}, {"window", 10.0}},
       gauge_invertibility},
      {"smoothing-sweep", 2, "Theorem 2.9: ||J^{1/2} u||_{L^2(lambda_2 dx dt)} <= C ||u0||",
       "local smoothing functional across carrier frequencies vs the J^1 control", {14},
       {{"L", 160.0}, {"N", 16384}, {"T", 1.0}, {"steps", 400}, {"x0", -8.0}, {"width", 1.0},
        {"carriers", {8, 16, 32, 64, 128}}, {"flat_tolerance", 0.1}, {"control_growth", 2.0}},
       smoothing_sweep},
      {"kato-half", 2, "Problem 2.4(a): ||D^{1/2} S(t) u0||_{L^inf_x L^2_t} <= C ||u0||",
       "Kato half-derivative ratio across carrier frequencies", {14},
       {{"L", 160.0}, {"N", 16384}, {"T", 1.0}, {"steps", 4000}, {"x0", -8.0}, {"width", 1.0},
        {"carriers", {8, 16, 32, 64, 128}}, {"flat_tolerance", 0.1}},
       kato_half},
      {"maximal", 3, "Lemma 3: ||S(t) u0||_{l^2_mu L^inf(Q_mu x [0,T])} <= C ||u0||_{H^s}",
       "maximal-function norm over a random data family", {},
       {{"L", 16.0}, {"N", 512}, {"T", 1.0}, {"steps", 200}, {"s", 3.0}, {"count", 8}, {"tolerance", 0.15}},
       maximal},
      {"mizohata", 3, "Eq. (3.12): |Im int_0^t b1(x + s w) . w ds| <= C",
       "Takeuchi-Mizohata line integrals for real, constant and decaying drifts", {15},
       {{"t_max", 50.0}, {"lines", 16}},
       mizohata},
      {"ichinose", 4, "Lecture 4: |int_0^t0 Im b1(X) . Xi ds| < infinity along bicharacteristics",
       "Ichinose integrals along free, escaping and trapped flows", {15},
       {{"t0", 20.0}, {"ds", 0.001}, {"trapped_t0", 60.0}},
       ichinose},
      {"drift-smoothing", 3, "Theorem 3.3: drift equation with Im b1 <= C lambda_2",
       "sup_t ||u||_{L^2} growth for decaying vs constant imaginary drift", {16},
       {{"L", 32.0}, {"N", 256}, {"T", 1.0}, {"steps", 2000}, {"x0", -6.0}, {"carrier", -4.0}, {"width", 1.0},
        {"decaying_max_growth", 1.1}, {"constant_min_growth", 2.0}},
       drift_smoothing},
      {"symmetrizer", 6, "Lecture 6: S M = diag(lambda+, -lambda+) S and det S >= 4",
       "symmetrizer identities at random elliptic samples", {17},
       {{"samples", 1000}, {"gamma", 0.5}},
       symmetrizer},
      {"mst-witness", 3, "Molinet-Saut-Tzvetkov: the flow map is not C^2",
       "second Picard iterate ratio for the resonant two-block data", {18},
       {{"alpha", 0.001}, {"N_values", {100, 200}}, {"t_values", {1.0, 2.0}}, {"s", 1.0}, {"nodes", 200},
        {"min_growth", 1.8}, {"time_tolerance", 0.2}},
       mst_witness},
      {"commutator", 5, "Problem 5.1: ||J^s(fg) - f J^s g|| <= C ||g||_inf ||J^s f||, 0 < s < 1",
       "maximal commutator ratio over random pairs under N -> 2N", {19},
       {{"L", 3.141592653589793}, {"N", 256}, {"pairs", 200}, {"modes", 16}, {"s_values", {0.25, 0.5, 0.75}},
        {"tolerance", 0.2}},
       commutator},
  };
  return list;
}

const Scenario* find(std::string_view id) {
  for (const auto& s : catalog())
    if (s.id == id) return &s;
  return nullptr;
}

nlohmann::json catalog_json(std::optional<int> lecture) {
  json out = json::array();
  for (const auto& s : catalog()) {
    if (lecture && s.lecture != *lecture) continue;
    out.push_back({{"id", s.id},
                   {"lecture", s.lecture},
                   {"anchor", s.anchor},
                   {"summary", s.summary},
                   {"acceptance", s.acceptance},
                   {"defaults", s.defaults}});
  }
  return out;
}

void validate(const nlohmann::json& entry) {
  const Scenario& s = lookup(entry);
  entry_seed(entry);
  resolve(s, entry);
}

std::vector<nlohmann::json> expand(const nlohmann::json& config) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  std::vector<json> out;
  if (auto it = config.find("scenarios"); it != config.end()) {
    for (const auto& [key, value] : config.items())
      if (key != "scenarios" && key != "seed") throw ConfigError("unknown config key '" + key + "'");
    if (!it->is_array() || it->empty()) throw ConfigError("'scenarios' must be a nonempty array");
    for (json e : *it) {
      if (e.is_string()) e = json{{"scenario", e}};
      if (e.is_object() && !e.contains("seed") && config.contains("seed")) e["seed"] = config["seed"];
      validate(e);
      out.push_back(e);
    }
  } else {
    validate(config);
    out.push_back(config);
  }
  return out;
}

Outcome run(const nlohmann::json& entry, const std::filesystem::path& dir) {
  const Scenario& s = lookup(entry);
  const std::uint64_t seed = entry_seed(entry);
  const json params = resolve(s, entry);
  const auto start = std::chrono::steady_clock::now();
  OutputDir out(dir);
  Context ctx(params, seed, out);
  try {
    s.body(ctx);
  } catch (const doi::Refusal& r) {
    ctx.refused = true;
    ctx.check("refusal", 0, "construction completed under verified hypotheses", false, 0.0, 0.0,
              {{"reason", r.what()}, {"x", {r.x[0], r.x[1]}}, {"xi", {r.xi[0], r.xi[1]}}});
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    ctx.check("error", 0, "scenario completed without numerical or precondition errors", false, 0.0, 0.0,
              {{"message", e.what()}});
  }
  if (std::find(out.files().begin(), out.files().end(), "norms.csv") == out.files().end())
    out.write("norms.csv", [](std::ostream& o) { o << "t,l2,hs,weighted_l2_m2,cube_sup\n"; });

  Outcome o;
  o.id = s.id;
  o.refused = ctx.refused;
  o.criteria = ctx.criteria();
  o.passed = !o.criteria.empty() &&
             std::all_of(o.criteria.begin(), o.criteria.end(), [](const Criterion& c) { return c.pass; });
  json crit = json::array();
  json verdicts = json::object();
  for (const auto& c : o.criteria) {
    crit.push_back(to_json(c));
    verdicts[c.id] = c.pass;
  }
  out.write_json("criteria.json", {{"scenario", s.id}, {"passed", o.passed}, {"refused", o.refused}, {"criteria", crit}});
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.manifest = {{"scenario", s.id},
                {"lecture", s.lecture},
                {"anchor", s.anchor},
                {"tool_version", tool_version()},
                {"seed", seed},
                {"config", {{"scenario", s.id}, {"seed", seed}, {"params", params}}},
                {"files", out.files()},
                {"wall_time_seconds", wall},
                {"criteria", verdicts},
                {"passed", o.passed},
                {"refused", o.refused},
                {"results", ctx.summary()}};
  std::ofstream(dir / "manifest.json") << o.manifest.dump(2) << '\n';
  return o;
}

VerifyReport verify(const std::filesystem::path& dir) {
  VerifyReport r;
  const auto manifest_path = dir / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) throw ConfigError("no manifest.json in " + dir.string());
  json m;
  try {
    m = read_json(manifest_path);
  } catch (const std::exception& e) {
    throw ConfigError("unreadable manifest " + manifest_path.string() + ": " + e.what());
  }
  if (auto runs = m.find("runs"); runs != m.end()) {
    for (const auto& run : *runs) {
      const auto sub = dir / run.at("dir").get<std::string>();
      VerifyReport child;
      try {
        child = verify(sub);
      } catch (const ConfigError& e) {
        child.consistent = false;
        child.passed = false;
        child.problems.push_back(e.what());
      }
      r.consistent = r.consistent && child.consistent;
      r.passed = r.passed && child.passed;
      for (auto& p : child.problems) r.problems.push_back(run.at("dir").get<std::string>() + ": " + p);
      if (run.value("passed", false) != child.passed) {
        r.consistent = false;
        r.problems.push_back(run.at("dir").get<std::string>() + ": top-level verdict disagrees with the run");
      }
    }
    return r;
  }
  for (const char* key : {"scenario", "lecture", "anchor", "config", "files", "criteria", "passed", "seed"})
    if (!m.contains(key)) {
      r.consistent = false;
      r.problems.push_back(std::string("manifest lacks '") + key + "'");
    }
  if (!r.consistent) {
    r.passed = false;
    return r;
  }
  for (const auto& f : m["files"]) {
    if (!std::filesystem::exists(dir / f.get<std::string>())) {
      r.consistent = false;
      r.problems.push_back("indexed file missing: " + f.get<std::string>());
    }
  }
  if (!find(m["scenario"].get<std::string>())) {
    r.consistent = false;
    r.problems.push_back("unknown scenario " + m["scenario"].get<std::string>());
  }
  if (std::filesystem::exists(dir / "criteria.json")) {
    const json c = read_json(dir / "criteria.json");
    bool all = !c["criteria"].empty();
    for (const auto& item : c["criteria"]) {
      const std::string id = item.at("id");
      all = all && item.at("pass").get<bool>();
      if (!m["criteria"].contains(id) || m["criteria"][id] != item.at("pass")) {
        r.consistent = false;
        r.problems.push_back("criterion " + id + " disagrees with the manifest");
      }
      if (!item.at("pass").get<bool>()) r.problems.push_back("criterion " + id + " failed");
    }
    if (all != m["passed"].get<bool>()) {
      r.consistent = false;
      r.problems.push_back("manifest verdict disagrees with criteria.json");
    }
    r.passed = all;
  } else {
    r.consistent = false;
    r.problems.push_back("criteria.json missing");
  }
  r.passed = r.passed && r.consistent;
  return r;
}

}  // namespace qslab::scenarios

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stackopt/degradation.hpp"
#include "stackopt/economics.hpp"
#include "stackopt/electrolyzer.hpp"
#include "stackopt/lifecycle.hpp"
#include "stackopt/lp.hpp"
#include "stackopt/sweep.hpp"
#include "stackopt/timeseries.hpp"

namespace stackopt {

struct PpaConfig {
  Source source = Source::Onshore;
  double price = 0.0;
  std::optional<std::filesystem::path> series;  // CSV; synthetic when absent
  std::uint64_t seed = 1;
  double max_booking = lp::kInf;
};

struct SolverConfig {
  std::string kind = "embedded";  // embedded | external
  double tol = 1e-7;
  std::size_t max_iters = 0;
  std::string command;  // external: template with {in} and {out}
  std::filesystem::path work_dir = ".";
};

struct RunConfig {
  std::size_t horizon = 8760;
  double dt = 1.0;
  double hours_per_year = 8760.0;
  std::size_t start_hour = 0;

  std::vector<PpaConfig> ppa;
  double demand_rate = 3200.0;  // kg/h, used when no demand series is given
  std::optional<std::filesystem::path> demand_series;
  StorageTerms storage;
  GridTerms grid;
  ElectrolyzerSpec electrolyzer;

  std::string scenario = "base_const";
  std::optional<DegradationScenario> custom_scenario;
  double alpha = 0.4125;
  bool operating_hours_only = false;

  EconomicTerms economics;
  double threshold = 20.0;  // %
  std::size_t max_years = 40;
  LowerBoundMode lower_bound_mode = LowerBoundMode::Current;
  LcohMode lcoh_mode = LcohMode::Averaged;

  SweepConfig sweep;
  SolverConfig solver;
  std::filesystem::path output_dir = "out";
  // Relative series paths resolve against this directory (the config file's).
  std::filesystem::path base_dir = ".";

  // Field-path diagnostics, e.g. "ppa[1].price: must be >= 0". Throws Config,
  // or FileNotFound for referenced series that do not exist.
  void validate() const;
};

// Defaults of the shipped parameter table: three PPA sources, storage on,
// surplus sale price 0.
RunConfig default_run_config();

// Unknown keys are rejected; missing keys keep their defaults.
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const RunConfig& config);

// $STACKOPT_CONFIG if set, else config/default_config.json.
std::filesystem::path default_config_path();

DegradationScenario resolve_scenario(const RunConfig& config);
// Loads or synthesizes every series and assembles the lifecycle inputs.
LifecycleConfig build_lifecycle_config(const RunConfig& config);
std::unique_ptr<lp::Solver> make_solver(const RunConfig& config);

}  // namespace stackopt

#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace ringdyn {

// Parses a JSON config file; syntax errors surface as ValidationError.
nlohmann::json load_config(const std::string& path);

// Subcommand runners. Each validates its document strictly (unknown keys
// rejected, messages carry "$.field.path" locations), runs the computation,
// and writes the subcommand's artifacts into out_dir. Relative file
// references inside a config resolve against config_dir.

// Writes trajectory.csv, diagnostics.json, plotdata.csv.
void run_simulate(const nlohmann::json& config, const std::string& config_dir,
                  const std::string& out_dir);

// Writes trajectory.csv, residual_report.json, plotdata.csv.
void run_construct(const nlohmann::json& config, const std::string& config_dir,
                   const std::string& out_dir);

// Writes gap_series.csv, classification.json; returns the classification
// document so callers can evaluate expectations.
nlohmann::json run_analyze(const nlohmann::json& config, const std::string& config_dir,
                           const std::string& out_dir);

// Writes admissibility.json.
void run_check_law(const nlohmann::json& config, const std::string& config_dir,
                   const std::string& out_dir);

// Writes configurations.json. The RINGDYN_SEED environment variable, when
// set, overrides the config seed.
void run_solve_config(const nlohmann::json& config, const std::string& config_dir,
                      const std::string& out_dir);

}  // namespace ringdyn

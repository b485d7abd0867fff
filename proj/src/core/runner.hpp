#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/diagnostics.hpp"

namespace csf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitRuntime = 4;
inline constexpr int kExitConfig = 5;

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string detail;
};

struct RunSummary {
    Termination termination = Termination::Completed;
    std::string error;
    double t_final = 0.0;
    long long steps = 0;
    double final_length = 0.0;
    double final_max_a2 = 0.0;
    std::vector<DiagnosticsRecord> records;
    std::vector<ConvergenceVerdict> convergence;
    std::vector<CheckResult> checks;
    int exit_code = kExitOk;
};

// Full experiment: build, advance, sample diagnostics, write
// diagnostics.csv, snapshots, final curve and summary.json under the output
// directory.  out_dir_override, when non-empty, replaces config.output.directory.
// Never throws; failures are encoded in exit_code / error.
RunSummary run_experiment(const RunConfig &config, const std::string &out_dir_override = "");

// Parses and runs; parse failures map to the config exit code.
int run_experiment_file(const std::string &config_path, const std::string &out_dir_override = "");
int run_experiment_text(const std::string &config_json, const std::string &out_dir_override = "");

// Parse + build the model and initial curve without advancing the flow.
int validate_config_file(const std::string &config_path);
int validate_config_text(const std::string &config_json);

} // namespace csf

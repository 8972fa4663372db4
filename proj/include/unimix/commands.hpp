#pragma once

// Subcommands of the unimix-lt tool. Each command resolves its settings as
// defaults <- --config file <- explicit flags, rejects unknown keys, and
// writes the resolved settings next to its outputs so that replaying them
// reproduces every output file.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "unimix/mlp.hpp"
#include "unimix/train.hpp"

namespace unimix {

/// Merges `overrides` into `base`; keys absent from `base` are rejected.
nlohmann::json merge_strict(nlohmann::json base, const nlohmann::json& overrides,
                            const std::string& context);

nlohmann::json gen_data_defaults();
nlohmann::json verify_dist_defaults();
nlohmann::json train_defaults();
nlohmann::json eval_defaults();
nlohmann::json circles_defaults();

/// Fills derived values (t1_steps, warmup, decay points) and validates.
nlohmann::json resolve_train_config(const nlohmann::json& merged);
TrainConfig train_config_from_json(const nlohmann::json& resolved);

nlohmann::json model_to_json(const Mlp& params);
Mlp model_from_json(const nlohmann::json& j);

namespace fs = std::filesystem;

/// Dataset CSV at `out` plus `<out>.meta.json`.
void run_gen_data(const nlohmann::json& resolved, const fs::path& out);
/// curves.csv, histogram CSVs, config.resolved.json under `out_dir`.
void run_verify_dist(const nlohmann::json& resolved, const fs::path& out_dir);
/// config.resolved.json, model.json, train_log.csv under `out_dir`.
void run_train(const nlohmann::json& resolved, const fs::path& out_dir);
/// report.json, reliability.csv, confusion.csv, density.csv,
/// eval_config.resolved.json under `out_dir`.
void run_eval(const nlohmann::json& resolved, const fs::path& out_dir);
/// boundary.csv, points.csv, config.resolved.json under `out_dir`.
void run_circles_demo(const nlohmann::json& resolved, const fs::path& out_dir);

struct ReportOutcome {
  int rows = 0;
  std::vector<std::string> warnings;
};
/// summary.csv and summary.json under `runs_dir`, one row per run directory
/// holding a readable report.json, ordered by directory name.
ReportOutcome run_report(const fs::path& runs_dir);

/// Entry point; returns the process exit code (0 ok, 1 usage/config/IO
/// error, 2 invariant violation).
int run_cli(int argc, char** argv);

}  // namespace unimix

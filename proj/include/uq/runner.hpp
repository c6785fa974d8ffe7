#pragma once

#include "uq/io.hpp"
#include "uq/lra.hpp"
#include "uq/pce.hpp"
#include "uq/types.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace uq {

/// Configuration problems (unknown keys, bad values, missing files) exit
/// with status 2; failures inside a run exit with status 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string model;  // beam | truss | eole-demo | external-table
  std::string output_dir;
  unsigned threads = 0;
  std::uint64_t ed_seed = 1;
  std::uint64_t analysis_seed = 1;

  std::string ed_sampler = "sobol";  // sobol | mcs
  Index ed_size = 0;
  Index validation_size = 100000;

  bool lra_enabled = true;
  LraConfig lra;
  bool pce_enabled = true;
  PceConfig pce;

  struct Reliability {
    std::vector<double> thresholds;
    long long sample_size = 10000000;  // surrogate MCS sample
    std::string reference = "auto";    // auto | analytical | is | none
    double target_cov = 0.10;
    Index is_batch = 100;
    Index max_batches = 100000;
  } reliability;

  struct Kde {
    Index points = 401;
    Index samples = 100000;
  } kde;

  struct Eole {
    Index nx = 11, ny = 11;
    double spacing = 0.1;
    double corr_length = 0.2;
    double variance_fraction = 0.99;
    double mean_kappa = 1.0;
    double std_kappa = 0.3;
  } eole;

  std::string table_path;            // external-table mode
  std::optional<Json> input_model;   // external-table mode
  std::string truss_geometry_path;   // optional truss override
};

/// Parse and fully validate a config document (unknown keys rejected).
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

struct RunOutcome {
  int exit_code = 0;
  std::string error;
  std::string stage;
  std::vector<std::string> artifacts;
};

/// Execute the configured experiment, writing ed.csv, model JSON files,
/// errors.json, KDE and pf-curve CSVs and summary.json into the output
/// directory. On failure the artifacts written so far are renamed with a
/// _partial suffix and an error.json is left behind.
RunOutcome run_experiment(const std::string& config_path);

/// Side-by-side comparison of two run summaries (markdown + CSV). Throws
/// ConfigError when the runs' thresholds do not match.
void compare_report(const std::string& summary_a, const std::string& summary_b,
                    const std::string& output_dir);

/// The JSON schema that summary.json documents conform to.
Json summary_schema();

}  // namespace uq

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "noncross/dataset.hpp"
#include "noncross/schedule.hpp"

namespace ncx {

struct ScheduleConfig {
  std::string kind = "toy_continuous";  // linear | cosine | toy_continuous
  int T = 1000;
  double beta_start = 1e-4;  // linear only
  double beta_end = 0.02;
};

// Settings for one trained model; the experiment driver instantiates both the
// unconditional baseline and the conditioned net from the same block.
struct ModelConfig {
  std::string arch = "concat";
  std::vector<int> hidden_dims = {64, 64};
  int steps = 20000;
  int batch_size = 32;
  double lr = 1e-3;
  double bootstrap_p = 0.5;
  bool cosine_lr_decay = false;
};

struct SampleConfig {
  std::vector<std::string> strategies = {"prev_step_pred", "current_step_pred"};
  std::vector<int> step_counts;  // empty -> mode-dependent default
  int n_samples = 1000;
};

// Single source of reproducibility: everything an experiment emits is a
// function of this struct plus the seed field inside it. out_dir is where the
// artifacts land and is deliberately kept out of the canonical form and hash.
struct ExperimentConfig {
  DatasetSpec dataset;
  int data_dim = 2;
  ScheduleConfig schedule;
  ModelConfig train;
  SampleConfig sample;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
};

bool is_toy(const ExperimentConfig& cfg);

// Throws ConfigError with the offending field in the message.
void validate_config(const ExperimentConfig& cfg);

// Canonical form: sorted keys, defaults materialized, out_dir omitted.
nlohmann::json config_to_json(const ExperimentConfig& cfg);
std::string canonical_config_string(const ExperimentConfig& cfg);

// FNV-1a 64 over the canonical string, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

// Unknown keys anywhere are rejected; absent keys take defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

// out_dir, unless the NONCROSS_OUT_DIR environment variable overrides it.
std::string resolved_out_dir(const ExperimentConfig& cfg);

// Discrete schedules only; toy_continuous has no beta table to build.
Schedule build_schedule(const ScheduleConfig& sc);

}  // namespace ncx

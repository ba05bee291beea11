#pragma once

#include <string>
#include <vector>

#include "noncross/checkpoint.hpp"
#include "noncross/config.hpp"
#include "noncross/metrics.hpp"
#include "noncross/training.hpp"

namespace ncx {

// One (method, step count) cell of the sweep grid. Method is "baseline" for
// the unconditional net or "noncross:<strategy>" for the conditioned net.
struct MethodRun {
  std::string method;
  int n_steps = 0;
  MetricReport report;
  Tensor finals;  // [n_samples x d]
};

struct ExperimentResult {
  std::string config_hash;
  std::string out_dir;
  std::vector<MethodRun> runs;
};

struct TrainedModels {
  Denoiser baseline;
  Denoiser noncross;
  AdamState adam_baseline;
  AdamState adam_noncross;
};

// Stage functions, each deterministic in (config, seed). The CLI verbs map
// onto them one-to-one; run_experiment chains all stages plus plot export.
// Every stage writes into resolved_out_dir(cfg).

// Writes config.json, logs/train_*.jsonl, checkpoints/*.ckpt.
TrainedModels train_models(const ExperimentConfig& cfg);

TrainedModels load_models(const ExperimentConfig& cfg);

// Initial noises are shared across every method and step count: chain i draws
// from its own substream of cfg.seed.
Tensor initial_noises(const ExperimentConfig& cfg);

// Target-side reference points used for the data range, OOD radius checks,
// and the fidelity distance.
Tensor reference_points(const ExperimentConfig& cfg);

// Writes samples.csv and per-(method, N) exemplar trajectory JSON files.
void write_samples(const ExperimentConfig& cfg, const TrainedModels& models);

// Samples every (method, N) cell, computes metrics, writes metrics.json and
// metrics.csv, and returns the grid with finals attached.
ExperimentResult eval_metrics(const ExperimentConfig& cfg, const TrainedModels& models);

// Continuity probe for the conditioned model; discrete schedules only.
// Writes probe/continuity.csv and probe/continuity.json.
std::vector<ContinuityRow> run_probe(const ExperimentConfig& cfg, const TrainedModels& models);

// train + samples + metrics + plots.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Shortest-round-trip decimal form, the one notation used in every CSV.
std::string format_double(double v);

}  // namespace ncx

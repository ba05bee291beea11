#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "noncross/adam.hpp"
#include "noncross/dataset.hpp"
#include "noncross/denoiser.hpp"
#include "noncross/schedule.hpp"

namespace ncx {

enum class TrainMode { ddpm_eps, toy_velocity };

const char* train_mode_name(TrainMode m);
TrainMode train_mode_from_name(const std::string& name);

struct TrainConfig {
  TrainMode mode = TrainMode::toy_velocity;
  bool conditioned = false;
  double bootstrap_p = 0.5;
  int steps = 1000;
  int batch_size = 32;
  double lr = 1e-3;
  bool cosine_lr_decay = false;
  std::uint64_t seed = 0;
};

struct StepLog {
  int step = 0;
  double loss = 0.0;
  double case1_fraction = 0.0;
};

// Randomness for one optimizer step, drawn ahead of the arithmetic. Example i
// always comes from substream derive(seed, tag, step, i) with a fixed draw
// order (pair, t, then the bootstrap uniform), so a conditioned run and an
// unconditioned run consume identical data under a shared seed.
struct BatchDraw {
  Tensor x0;              // [B x d]
  Tensor x1;              // [B x d]; the noise in ddpm mode
  std::vector<double> t;  // integer-valued in ddpm mode, [0,1) in toy mode
  std::vector<double> u;  // bootstrap uniforms; empty when not conditioned
};

BatchDraw draw_batch(const DatasetSpec& data, const TrainConfig& cfg, const Schedule* sched, int step);

// One optimizer step of the bootstrap objective: with probability p the
// condition is zero, otherwise it is the net's own zero-condition prediction,
// computed off-tape so no gradient flows through it.
double train_step_noncross(Denoiser& net, AdamState& adam, const Schedule& sched, const BatchDraw& batch,
                           double bootstrap_p, double* case1_fraction = nullptr);

// Plain epsilon regression; the condition is identically zero (or absent for
// the unconditional arch).
double train_step_ddpm_baseline(Denoiser& net, AdamState& adam, const Schedule& sched, const BatchDraw& batch,
                                double* case1_fraction = nullptr);

// Rectified-flow velocity regression on x_t = t*x1 + (1-t)*x0 with target
// x1 - x0, optionally with the bootstrap condition.
double train_step_toy(Denoiser& net, AdamState& adam, const BatchDraw& batch, bool conditioned, double bootstrap_p,
                      double* case1_fraction = nullptr);

// Drives draw_batch + the matching step function; emits one NDJSON record
// {step, loss, case1_fraction} per step when log_out is given.
std::vector<StepLog> run_training(Denoiser& net, AdamState& adam, const DatasetSpec& data, const TrainConfig& cfg,
                                  const Schedule* sched, std::ostream* log_out = nullptr);

// Two flows that provably share the state z at step t: both pairs satisfy
// q_sample(x0, eps, t) == z with eps_A = +1 and eps_B = -1 per coordinate.
std::pair<FlowPair, FlowPair> make_crossing_pair(const Tensor& z, int t, const Schedule& sched);

}  // namespace ncx

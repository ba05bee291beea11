#pragma once

#include <string>
#include <vector>

#include "noncross/denoiser.hpp"
#include "noncross/schedule.hpp"

namespace ncx {

// Condition fed to the denoiser during deterministic sampling.
//   zero:              always the zero tensor
//   groundtruth_eps:   the retained initial noise
//   prev_step_pred:    the previous step's prediction (condition carryover)
//   current_step_pred: an extra zero-condition pass at the current step,
//                      whose output conditions the real pass
enum class Strategy { zero, groundtruth_eps, prev_step_pred, current_step_pred };

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct Trajectory {
  std::vector<double> step_times;  // descending; integer-valued in ddpm mode
  std::vector<Tensor> states;
  std::vector<Tensor> eps_hats;
  std::vector<Tensor> x0_preds;
  Tensor final;
};

// Chains kept together as [B x d] matrices per step; row i is chain i,
// bit-identical to running that chain alone.
struct BatchTrajectory {
  std::vector<double> step_times;
  std::vector<Tensor> states;
  std::vector<Tensor> eps_hats;
  std::vector<Tensor> x0_preds;
  Tensor finals;

  int n_steps() const { return static_cast<int>(step_times.size()); }
  int n_chains() const { return finals.rows(); }
  Trajectory chain(int i) const;
};

// Uniform-stride descending grid over {0..T-1}, always starting at the
// noisiest step: grid[i] = T-1 - floor(i*T/N).
std::vector<int> ddim_time_grid(int T, int N);

// x0_hat = predict_x0(x_t, eps_hat, t), then deterministic re-noising at
// t_prev; t_prev == -1 returns x0_hat itself. Accepts t_prev == t (round trip).
Tensor ddim_step(const Schedule& sched, const Tensor& x_t, const Tensor& eps_hat, int t, int t_prev);

BatchTrajectory sample_many(const Denoiser& net, const Schedule& sched, Strategy strategy, int N, const Tensor& x_T);
Trajectory sample(const Denoiser& net, const Schedule& sched, Strategy strategy, int N, const Tensor& x_T);

// Euler integration of dx/dt = -v_hat from t=1 down to t=0 in N strides;
// x0_hat at time t is x_t - t*v_hat.
BatchTrajectory sample_toy_many(const Denoiser& net, Strategy strategy, int N, const Tensor& x1);
Trajectory sample_toy(const Denoiser& net, Strategy strategy, int N, const Tensor& x1);

}  // namespace ncx

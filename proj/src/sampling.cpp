#include "noncross/sampling.hpp"

namespace ncx {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::zero: return "zero";
    case Strategy::groundtruth_eps: return "groundtruth_eps";
    case Strategy::prev_step_pred: return "prev_step_pred";
    case Strategy::current_step_pred: return "current_step_pred";
  }
  return "?";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "zero") return Strategy::zero;
  if (name == "groundtruth_eps") return Strategy::groundtruth_eps;
  if (name == "prev_step_pred") return Strategy::prev_step_pred;
  if (name == "current_step_pred") return Strategy::current_step_pred;
  throw ConfigError("unknown condition strategy: " + name);
}

Trajectory BatchTrajectory::chain(int i) const {
  if (i < 0 || i >= n_chains()) throw IndexError("chain index out of range");
  Trajectory t;
  t.step_times = step_times;
  for (int k = 0; k < n_steps(); ++k) {
    t.states.push_back(extract_row(states[k], i));
    t.eps_hats.push_back(extract_row(eps_hats[k], i));
    t.x0_preds.push_back(extract_row(x0_preds[k], i));
  }
  t.final = extract_row(finals, i);
  return t;
}

std::vector<int> ddim_time_grid(int T, int N) {
  if (N < 1) throw ConfigError("ddim_time_grid: N must be >= 1");
  if (N > T) throw ConfigError("ddim_time_grid: N exceeds schedule length");
  std::vector<int> grid(N);
  for (int i = 0; i < N; ++i)
    grid[i] = T - 1 - static_cast<int>((static_cast<std::int64_t>(i) * T) / N);
  return grid;
}

Tensor ddim_step(const Schedule& sched, const Tensor& x_t, const Tensor& eps_hat, int t, int t_prev) {
  if (t_prev > t) throw ContractError("ddim_step: times must be non-increasing");
  if (t_prev < -1) throw ContractError("ddim_step: t_prev below -1");
  Tensor x0 = predict_x0(sched, x_t, eps_hat, t);
  if (t_prev == -1) return x0;
  const double a = sched.sqrt_alpha_bar[t_prev];
  const double b = sched.sqrt_one_minus_alpha_bar[t_prev];
  Tensor out = x0;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = a * x0.data[i] + b * eps_hat.data[i];
  return out;
}

namespace {

Tensor condition_for_step(Strategy strategy, int step_index, const Denoiser& net, const Tensor& x,
                          const Tensor& x_init, const Tensor& eps_prev, const std::vector<double>& t_norm) {
  const int B = x.rows();
  const int d = x.cols();
  // the first step never consumes a nonzero condition, whatever the strategy
  if (step_index == 0) return Tensor::zeros({B, d});
  switch (strategy) {
    case Strategy::zero:
      return Tensor::zeros({B, d});
    case Strategy::groundtruth_eps:
      return x_init;
    case Strategy::prev_step_pred:
      return eps_prev;
    case Strategy::current_step_pred:
      return net.forward(x, Tensor::zeros({B, d}), t_norm);
  }
  throw ContractError("unreachable strategy");
}

void check_batch_input(const Denoiser& net, const Tensor& x) {
  if (!x.is_matrix() || x.cols() != net.data_dim)
    throw DimensionError("sampler: initial state must be [B x data_dim]");
}

}  // namespace

BatchTrajectory sample_many(const Denoiser& net, const Schedule& sched, Strategy strategy, int N, const Tensor& x_T) {
  check_batch_input(net, x_T);
  const std::vector<int> grid = ddim_time_grid(sched.T, N);
  const int B = x_T.rows();
  const int d = net.data_dim;

  BatchTrajectory out;
  Tensor x = x_T;
  Tensor eps_prev = Tensor::zeros({B, d});
  for (int i = 0; i < N; ++i) {
    const int t = grid[i];
    const std::vector<double> t_norm(B, static_cast<double>(t) / sched.T);
    Tensor cond = condition_for_step(strategy, i, net, x, x_T, eps_prev, t_norm);
    Tensor eps_hat = net.forward(x, cond, t_norm);
    Tensor x0 = predict_x0(sched, x, eps_hat, t);

    out.step_times.push_back(static_cast<double>(t));
    out.states.push_back(x);
    out.eps_hats.push_back(eps_hat);
    out.x0_preds.push_back(x0);

    if (i + 1 < N) {
      const int t_prev = grid[i + 1];
      const double a = sched.sqrt_alpha_bar[t_prev];
      const double b = sched.sqrt_one_minus_alpha_bar[t_prev];
      Tensor next = x0;
      for (size_t k = 0; k < next.data.size(); ++k) next.data[k] = a * x0.data[k] + b * eps_hat.data[k];
      x = std::move(next);
    } else {
      x = x0;
    }
    eps_prev = std::move(eps_hat);
  }
  out.finals = x;
  check_finite(out.finals, "sample_many finals");
  return out;
}

Trajectory sample(const Denoiser& net, const Schedule& sched, Strategy strategy, int N, const Tensor& x_T) {
  if (x_T.shape.size() != 1 || x_T.shape[0] != net.data_dim)
    throw DimensionError("sample: initial state must be [data_dim]");
  Tensor xm({1, net.data_dim}, x_T.data);
  return sample_many(net, sched, strategy, N, xm).chain(0);
}

BatchTrajectory sample_toy_many(const Denoiser& net, Strategy strategy, int N, const Tensor& x1) {
  check_batch_input(net, x1);
  if (N < 1) throw ConfigError("sample_toy: N must be >= 1");
  const int B = x1.rows();
  const int d = net.data_dim;
  const double h = 1.0 / N;

  BatchTrajectory out;
  Tensor x = x1;
  Tensor v_prev = Tensor::zeros({B, d});
  for (int k = 0; k < N; ++k) {
    const double t = static_cast<double>(N - k) / N;
    const std::vector<double> t_norm(B, t);
    Tensor cond = condition_for_step(strategy, k, net, x, x1, v_prev, t_norm);
    Tensor v = net.forward(x, cond, t_norm);

    Tensor x0 = x;
    for (size_t i = 0; i < x0.data.size(); ++i) x0.data[i] = x.data[i] - t * v.data[i];

    out.step_times.push_back(t);
    out.states.push_back(x);
    out.eps_hats.push_back(v);
    out.x0_preds.push_back(x0);

    if (k + 1 < N) {
      Tensor next = x;
      for (size_t i = 0; i < next.data.size(); ++i) next.data[i] = x.data[i] - h * v.data[i];
      x = std::move(next);
    } else {
      // t == h on the last stride, so the Euler update and the x0 estimate
      // are the same expression; reuse it bit-for-bit
      x = x0;
    }
    v_prev = out.eps_hats.back();
  }
  out.finals = x;
  check_finite(out.finals, "sample_toy finals");
  return out;
}

Trajectory sample_toy(const Denoiser& net, Strategy strategy, int N, const Tensor& x1) {
  if (x1.shape.size() != 1 || x1.shape[0] != net.data_dim)
    throw DimensionError("sample_toy: initial state must be [data_dim]");
  Tensor xm({1, net.data_dim}, x1.data);
  return sample_toy_many(net, strategy, N, xm).chain(0);
}

}  // namespace ncx

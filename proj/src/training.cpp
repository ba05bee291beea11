#include "noncross/training.hpp"

#include <cmath>

#include <json.hpp>

namespace ncx {

namespace {

constexpr std::uint64_t kBatchTag = 0x62617463;  // substream tag for training batches

// Condition matrix for one step: zero rows for Case 1 (u <= p), the net's own
// zero-condition prediction for Case 2 rows. The Case-2 pass runs on its own
// throwaway tape inside forward(), so it is a constant to the optimizer.
Tensor build_condition(const Denoiser& net, const Tensor& x_in, const std::vector<double>& t_norm,
                       const std::vector<double>& u, double bootstrap_p, double* case1_fraction) {
  const int B = x_in.rows();
  const int d = x_in.cols();
  Tensor cond = Tensor::zeros({B, d});
  int case1 = B;
  bool any_case2 = false;
  for (double ui : u)
    if (ui > bootstrap_p) any_case2 = true;
  if (any_case2) {
    const Tensor eps_hat = net.forward(x_in, Tensor::zeros({B, d}), t_norm);
    case1 = 0;
    for (int i = 0; i < B; ++i) {
      if (u[i] > bootstrap_p) {
        for (int j = 0; j < d; ++j) cond.at(i, j) = eps_hat.at(i, j);
      } else {
        ++case1;
      }
    }
  }
  if (case1_fraction) *case1_fraction = static_cast<double>(case1) / B;
  return cond;
}

double optimize_step(Denoiser& net, AdamState& adam, const Tensor& x_in, const Tensor& cond,
                     const std::vector<double>& t_norm, const Tensor& target) {
  Tape tape;
  std::vector<Var> pv = net.push_params(tape);
  Var out = net.forward_on_tape(tape, pv, x_in, cond, t_norm);
  Var tv = tape.input(target, false);
  Var loss = tape.scale(tape.sum_sq(tape.sub(out, tv)), 1.0 / x_in.rows());
  const double loss_value = tape.value(loss).data[0];
  if (!std::isfinite(loss_value)) throw DivergedError("non-finite training loss");
  tape.backward(loss);
  std::vector<Tensor> grads;
  grads.reserve(pv.size());
  for (Var v : pv) grads.push_back(tape.grad(v));
  adam_step(net.params, grads, adam);
  return loss_value;
}

}  // namespace

const char* train_mode_name(TrainMode m) {
  return m == TrainMode::ddpm_eps ? "ddpm_eps" : "toy_velocity";
}

TrainMode train_mode_from_name(const std::string& name) {
  if (name == "ddpm_eps") return TrainMode::ddpm_eps;
  if (name == "toy_velocity") return TrainMode::toy_velocity;
  throw ConfigError("unknown train mode: " + name);
}

BatchDraw draw_batch(const DatasetSpec& data, const TrainConfig& cfg, const Schedule* sched, int step) {
  if (cfg.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (cfg.mode == TrainMode::ddpm_eps && sched == nullptr) throw ContractError("ddpm_eps training needs a schedule");
  const int d = dataset_dim(data);
  BatchDraw batch;
  batch.x0 = Tensor::zeros({cfg.batch_size, d});
  batch.x1 = Tensor::zeros({cfg.batch_size, d});
  batch.t.resize(cfg.batch_size);
  if (cfg.conditioned) batch.u.resize(cfg.batch_size);
  for (int i = 0; i < cfg.batch_size; ++i) {
    Rng rng(Rng::derive(cfg.seed, kBatchTag, static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(i)));
    FlowPair pair = draw_pair(data, rng);
    for (int j = 0; j < d; ++j) {
      batch.x0.at(i, j) = pair.x0.data[j];
      batch.x1.at(i, j) = pair.x1.data[j];
    }
    batch.t[i] = (cfg.mode == TrainMode::ddpm_eps) ? static_cast<double>(rng.uniform_int(sched->T)) : rng.uniform01();
    if (cfg.conditioned) batch.u[i] = rng.uniform01();
  }
  return batch;
}

double train_step_noncross(Denoiser& net, AdamState& adam, const Schedule& sched, const BatchDraw& batch,
                           double bootstrap_p, double* case1_fraction) {
  if (net.arch == Arch::unconditional)
    throw ContractError("train_step_noncross: needs a conditional architecture");
  if (!(bootstrap_p >= 0.0 && bootstrap_p <= 1.0)) throw ConfigError("bootstrap_p must be in [0,1]");
  if (batch.u.size() != static_cast<size_t>(batch.x0.rows()))
    throw ContractError("train_step_noncross: batch has no bootstrap draws");
  const int B = batch.x0.rows();
  const int d = batch.x0.cols();
  Tensor x_t = Tensor::zeros({B, d});
  std::vector<double> t_norm(B);
  for (int i = 0; i < B; ++i) {
    const int t = static_cast<int>(batch.t[i]);
    const double a = sched.sqrt_alpha_bar[t];
    const double b = sched.sqrt_one_minus_alpha_bar[t];
    for (int j = 0; j < d; ++j) x_t.at(i, j) = a * batch.x0.at(i, j) + b * batch.x1.at(i, j);
    t_norm[i] = static_cast<double>(t) / sched.T;
  }
  Tensor cond = build_condition(net, x_t, t_norm, batch.u, bootstrap_p, case1_fraction);
  return optimize_step(net, adam, x_t, cond, t_norm, batch.x1);
}

double train_step_ddpm_baseline(Denoiser& net, AdamState& adam, const Schedule& sched, const BatchDraw& batch,
                                double* case1_fraction) {
  const int B = batch.x0.rows();
  const int d = batch.x0.cols();
  Tensor x_t = Tensor::zeros({B, d});
  std::vector<double> t_norm(B);
  for (int i = 0; i < B; ++i) {
    const int t = static_cast<int>(batch.t[i]);
    const double a = sched.sqrt_alpha_bar[t];
    const double b = sched.sqrt_one_minus_alpha_bar[t];
    for (int j = 0; j < d; ++j) x_t.at(i, j) = a * batch.x0.at(i, j) + b * batch.x1.at(i, j);
    t_norm[i] = static_cast<double>(t) / sched.T;
  }
  if (case1_fraction) *case1_fraction = 1.0;
  return optimize_step(net, adam, x_t, Tensor::zeros({B, d}), t_norm, batch.x1);
}

double train_step_toy(Denoiser& net, AdamState& adam, const BatchDraw& batch, bool conditioned, double bootstrap_p,
                      double* case1_fraction) {
  if (conditioned && net.arch == Arch::unconditional)
    throw ContractError("train_step_toy: conditioned training needs a conditional architecture");
  if (conditioned && batch.u.size() != static_cast<size_t>(batch.x0.rows()))
    throw ContractError("train_step_toy: batch has no bootstrap draws");
  const int B = batch.x0.rows();
  const int d = batch.x0.cols();
  Tensor x_t = Tensor::zeros({B, d});
  Tensor target = Tensor::zeros({B, d});
  std::vector<double> t_norm(B);
  for (int i = 0; i < B; ++i) {
    const double t = batch.t[i];
    for (int j = 0; j < d; ++j) {
      x_t.at(i, j) = t * batch.x1.at(i, j) + (1.0 - t) * batch.x0.at(i, j);
      target.at(i, j) = batch.x1.at(i, j) - batch.x0.at(i, j);
    }
    t_norm[i] = t;
  }
  Tensor cond = conditioned ? build_condition(net, x_t, t_norm, batch.u, bootstrap_p, case1_fraction)
                            : Tensor::zeros({B, d});
  if (!conditioned && case1_fraction) *case1_fraction = 1.0;
  return optimize_step(net, adam, x_t, cond, t_norm, target);
}

std::vector<StepLog> run_training(Denoiser& net, AdamState& adam, const DatasetSpec& data, const TrainConfig& cfg,
                                  const Schedule* sched, std::ostream* log_out) {
  if (cfg.steps < 1) throw ConfigError("train steps must be >= 1");
  if (cfg.mode == TrainMode::ddpm_eps && sched == nullptr) throw ContractError("ddpm_eps training needs a schedule");
  const double lr0 = cfg.lr;
  std::vector<StepLog> logs;
  logs.reserve(cfg.steps);
  for (int step = 0; step < cfg.steps; ++step) {
    if (cfg.cosine_lr_decay) adam.lr = lr0 * 0.5 * (1.0 + std::cos(3.14159265358979323846 * step / cfg.steps));
    BatchDraw batch = draw_batch(data, cfg, sched, step);
    double case1 = 1.0;
    double loss = 0.0;
    try {
      if (cfg.mode == TrainMode::ddpm_eps) {
        loss = cfg.conditioned ? train_step_noncross(net, adam, *sched, batch, cfg.bootstrap_p, &case1)
                               : train_step_ddpm_baseline(net, adam, *sched, batch, &case1);
      } else {
        loss = train_step_toy(net, adam, batch, cfg.conditioned, cfg.bootstrap_p, &case1);
      }
    } catch (const DivergedError&) {
      throw DivergedError("training diverged at step " + std::to_string(step));
    }
    logs.push_back({step, loss, case1});
    if (log_out) {
      nlohmann::json line{{"step", step}, {"loss", loss}, {"case1_fraction", case1}};
      (*log_out) << line.dump() << "\n";
    }
  }
  adam.lr = lr0;
  return logs;
}

std::pair<FlowPair, FlowPair> make_crossing_pair(const Tensor& z, int t, const Schedule& sched) {
  Tensor eps_a = Tensor::full(z.shape, 1.0);
  Tensor eps_b = Tensor::full(z.shape, -1.0);
  FlowPair a{predict_x0(sched, z, eps_a, t), eps_a};
  FlowPair b{predict_x0(sched, z, eps_b, t), eps_b};
  return {std::move(a), std::move(b)};
}

}  // namespace ncx

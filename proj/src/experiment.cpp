#include "noncross/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "noncross/plots.hpp"
#include "noncross/sampling.hpp"

namespace ncx {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kTrainTag = 0x74726169;  // shared data stream for both models
constexpr std::uint64_t kInitTag = 0x696e6974;   // per-model weight init
constexpr std::uint64_t kChainTag = 0x6368616e;  // per-chain initial noise
constexpr std::uint64_t kRefTag = 0x72656673;    // reference draws
constexpr std::uint64_t kProbeTag = 0x70726265;  // probe root seed
constexpr std::uint64_t kExemplarCap = 16;

std::string method_token(const std::string& method) {
  std::string t = method;
  for (char& c : t)
    if (c == ':') c = '_';
  return t;
}

std::vector<std::string> method_list(const ExperimentConfig& cfg) {
  std::vector<std::string> methods = {"baseline"};
  for (const std::string& s : cfg.sample.strategies) methods.push_back("noncross:" + s);
  return methods;
}

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create directory " + p.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

TrainConfig train_config_of(const ExperimentConfig& cfg, bool conditioned) {
  TrainConfig tc;
  tc.mode = is_toy(cfg) ? TrainMode::toy_velocity : TrainMode::ddpm_eps;
  tc.conditioned = conditioned;
  tc.bootstrap_p = cfg.train.bootstrap_p;
  tc.steps = cfg.train.steps;
  tc.batch_size = cfg.train.batch_size;
  tc.lr = cfg.train.lr;
  tc.cosine_lr_decay = cfg.train.cosine_lr_decay;
  tc.seed = Rng::derive(cfg.seed, kTrainTag);
  return tc;
}

// Sampling dispatch for one method cell; x_init rows are the shared noises.
BatchTrajectory run_chains(const ExperimentConfig& cfg, const Denoiser& net, const Schedule* sched,
                           Strategy strategy, int n_steps, const Tensor& x_init) {
  if (is_toy(cfg)) return sample_toy_many(net, strategy, n_steps, x_init);
  return sample_many(net, *sched, strategy, n_steps, x_init);
}

nlohmann::json trajectory_to_json(const Trajectory& t, const std::string& hash) {
  auto vec_of = [](const Tensor& x) {
    return std::vector<double>(x.data.begin(), x.data.end());
  };
  nlohmann::json j;
  j["config_hash"] = hash;
  j["step_times"] = t.step_times;
  nlohmann::json states = nlohmann::json::array();
  for (const Tensor& s : t.states) states.push_back(vec_of(s));
  j["states"] = std::move(states);
  nlohmann::json preds = nlohmann::json::array();
  for (const Tensor& p : t.x0_preds) preds.push_back(vec_of(p));
  j["x0_preds"] = std::move(preds);
  j["final"] = vec_of(t.final);
  return j;
}

struct Cell {
  std::string method;
  int n_steps;
  const Denoiser* net;
  Strategy strategy;
};

std::vector<Cell> grid_of(const ExperimentConfig& cfg, const TrainedModels& models) {
  std::vector<Cell> cells;
  for (const std::string& method : method_list(cfg)) {
    for (int n : cfg.sample.step_counts) {
      if (method == "baseline") {
        cells.push_back({method, n, &models.baseline, Strategy::zero});
      } else {
        cells.push_back({method, n, &models.noncross,
                         strategy_from_name(method.substr(std::string("noncross:").size()))});
      }
    }
  }
  return cells;
}

}  // namespace

std::string format_double(double v) { return nlohmann::json(v).dump(); }

Tensor initial_noises(const ExperimentConfig& cfg) {
  Tensor x = Tensor::zeros({cfg.sample.n_samples, cfg.data_dim});
  for (int i = 0; i < cfg.sample.n_samples; ++i) {
    Rng rng(Rng::derive(cfg.seed, kChainTag, static_cast<std::uint64_t>(i)));
    for (int j = 0; j < cfg.data_dim; ++j) x.at(i, j) = rng.normal();
  }
  return x;
}

Tensor reference_points(const ExperimentConfig& cfg) {
  Tensor ref = Tensor::zeros({cfg.sample.n_samples, cfg.data_dim});
  for (int i = 0; i < cfg.sample.n_samples; ++i) {
    Rng rng(Rng::derive(cfg.seed, kRefTag, static_cast<std::uint64_t>(i)));
    Tensor p = draw_x0(cfg.dataset, rng);
    for (int j = 0; j < cfg.data_dim; ++j) ref.at(i, j) = p.data[j];
  }
  return ref;
}

TrainedModels train_models(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const fs::path out = resolved_out_dir(cfg);
  ensure_dir(out);
  ensure_dir(out / "logs");
  ensure_dir(out / "checkpoints");
  save_config(cfg, (out / "config.json").string());

  Schedule sched;
  std::vector<double> betas;
  if (!is_toy(cfg)) {
    sched = build_schedule(cfg.schedule);
    betas = sched.beta;
  }
  const Schedule* sp = is_toy(cfg) ? nullptr : &sched;

  Rng rng_b(Rng::derive(cfg.seed, kInitTag, 0));
  Rng rng_n(Rng::derive(cfg.seed, kInitTag, 1));
  TrainedModels models{
      Denoiser::init(Arch::unconditional, cfg.data_dim, cfg.train.hidden_dims, rng_b),
      Denoiser::init(arch_from_name(cfg.train.arch), cfg.data_dim, cfg.train.hidden_dims, rng_n),
      {},
      {}};
  models.adam_baseline = AdamState::init(models.baseline.params, cfg.train.lr);
  models.adam_noncross = AdamState::init(models.noncross.params, cfg.train.lr);

  {
    std::ofstream log = open_out(out / "logs" / "train_baseline.jsonl");
    run_training(models.baseline, models.adam_baseline, cfg.dataset, train_config_of(cfg, false), sp, &log);
  }
  {
    std::ofstream log = open_out(out / "logs" / "train_noncross.jsonl");
    run_training(models.noncross, models.adam_noncross, cfg.dataset, train_config_of(cfg, true), sp, &log);
  }

  save_checkpoint(make_checkpoint(cfg, models.baseline, models.adam_baseline, betas, cfg.train.steps),
                  (out / "checkpoints" / "baseline.ckpt").string());
  save_checkpoint(make_checkpoint(cfg, models.noncross, models.adam_noncross, betas, cfg.train.steps),
                  (out / "checkpoints" / "noncross.ckpt").string());
  return models;
}

TrainedModels load_models(const ExperimentConfig& cfg) {
  const fs::path out = resolved_out_dir(cfg);
  Checkpoint cb = load_checkpoint((out / "checkpoints" / "baseline.ckpt").string());
  Checkpoint cn = load_checkpoint((out / "checkpoints" / "noncross.ckpt").string());
  const std::string want = canonical_config_string(cfg);
  if (cb.config_json != want || cn.config_json != want)
    throw ContractError("checkpoints under " + out.string() + " were trained with a different config");
  TrainedModels models{denoiser_from_checkpoint(cb), denoiser_from_checkpoint(cn),
                       adam_from_checkpoint(cb), adam_from_checkpoint(cn)};
  return models;
}

void write_samples(const ExperimentConfig& cfg, const TrainedModels& models) {
  validate_config(cfg);
  const fs::path out = resolved_out_dir(cfg);
  ensure_dir(out);
  ensure_dir(out / "trajectories");

  Schedule sched;
  if (!is_toy(cfg)) sched = build_schedule(cfg.schedule);
  const Schedule* sp = is_toy(cfg) ? nullptr : &sched;
  const Tensor x_init = initial_noises(cfg);
  const std::string hash = config_hash(cfg);

  std::ofstream csv = open_out(out / "samples.csv");
  csv << "method,N_steps,sample";
  for (int j = 0; j < cfg.data_dim; ++j) csv << ",x" << j;
  csv << "\n";

  for (const Cell& cell : grid_of(cfg, models)) {
    BatchTrajectory traj = run_chains(cfg, *cell.net, sp, cell.strategy, cell.n_steps, x_init);
    for (int i = 0; i < traj.n_chains(); ++i) {
      csv << cell.method << "," << cell.n_steps << "," << i;
      for (int j = 0; j < cfg.data_dim; ++j) csv << "," << format_double(traj.finals.at(i, j));
      csv << "\n";
    }
    nlohmann::json exemplars = nlohmann::json::array();
    const int n_ex = static_cast<int>(std::min<std::uint64_t>(kExemplarCap, traj.n_chains()));
    for (int i = 0; i < n_ex; ++i) exemplars.push_back(trajectory_to_json(traj.chain(i), hash));
    std::ofstream tj =
        open_out(out / "trajectories" / (method_token(cell.method) + "_N" + std::to_string(cell.n_steps) + ".json"));
    tj << exemplars.dump() << "\n";
  }
  if (!csv) throw IoError("short write to samples.csv");
}

ExperimentResult eval_metrics(const ExperimentConfig& cfg, const TrainedModels& models) {
  validate_config(cfg);
  const fs::path out = resolved_out_dir(cfg);
  ensure_dir(out);

  Schedule sched;
  if (!is_toy(cfg)) sched = build_schedule(cfg.schedule);
  const Schedule* sp = is_toy(cfg) ? nullptr : &sched;

  const Tensor x_init = initial_noises(cfg);
  const Tensor ref = reference_points(cfg);
  const double range = data_range_of(ref);
  const std::vector<Tensor> modes = dataset_modes(cfg.dataset);
  const double radius = 3.0 * dataset_mode_sigma(cfg.dataset);

  ExperimentResult result;
  result.config_hash = config_hash(cfg);
  result.out_dir = out.string();

  for (const Cell& cell : grid_of(cfg, models)) {
    BatchTrajectory traj = run_chains(cfg, *cell.net, sp, cell.strategy, cell.n_steps, x_init);
    MethodRun run;
    run.method = cell.method;
    run.n_steps = cell.n_steps;
    run.finals = traj.finals;
    const std::vector<double> per_chain = ifc_per_chain(traj, range);
    double acc = 0.0;
    for (double v : per_chain) acc += v;
    run.report.ifc = acc / per_chain.size();
    run.report.ood_rate = ood_rate(traj.finals, modes, radius);
    run.report.fidelity = fidelity_proxy(traj.finals, ref);
    run.report.n_samples = cfg.sample.n_samples;
    run.report.config_hash = result.config_hash;
    if (!std::isfinite(run.report.ifc) || !std::isfinite(run.report.fidelity))
      throw NumericError("non-finite metric for " + cell.method);
    result.runs.push_back(std::move(run));
  }

  nlohmann::json mj = nlohmann::json::array();
  for (const MethodRun& run : result.runs) {
    mj.push_back({{"method", run.method},
                  {"N_steps", run.n_steps},
                  {"ifc", run.report.ifc},
                  {"ood_rate", run.report.ood_rate},
                  {"fidelity", run.report.fidelity},
                  {"n_samples", run.report.n_samples},
                  {"config_hash", run.report.config_hash}});
  }
  {
    std::ofstream out_json = open_out(out / "metrics.json");
    out_json << mj.dump(2) << "\n";
  }
  {
    std::ofstream csv = open_out(out / "metrics.csv");
    csv << "N_steps,method,ifc,ood_rate,fidelity\n";
    for (const MethodRun& run : result.runs) {
      csv << run.n_steps << "," << run.method << "," << format_double(run.report.ifc) << ","
          << format_double(run.report.ood_rate) << "," << format_double(run.report.fidelity) << "\n";
    }
    if (!csv) throw IoError("short write to metrics.csv");
  }
  return result;
}

std::vector<ContinuityRow> run_probe(const ExperimentConfig& cfg, const TrainedModels& models) {
  validate_config(cfg);
  if (is_toy(cfg))
    throw ConfigError("the continuity probe re-noises between grid times and needs a discrete schedule");
  const fs::path out = resolved_out_dir(cfg);
  ensure_dir(out / "probe");

  Schedule sched = build_schedule(cfg.schedule);
  int n_steps = cfg.sample.step_counts.front();
  for (int n : cfg.sample.step_counts)
    if (n >= 2 && (n_steps < 2 || n < n_steps)) n_steps = n;
  if (n_steps < 2) throw ConfigError("probe needs a step count of at least 2");
  // keep the injection off the final step, where re-noising never happens
  const int t_inject = std::min(n_steps / 2, n_steps - 2);
  const std::vector<double> weights = {0.0, 0.01, 0.05, 0.1, 0.2, 0.5};
  const int n_seeds = 200;
  const Strategy strategy = strategy_from_name(cfg.sample.strategies.front());

  auto rows = continuity_probe(models.noncross, sched, strategy, n_steps, t_inject, weights, n_seeds,
                               Rng::derive(cfg.seed, kProbeTag));

  {
    std::ofstream csv = open_out(out / "probe" / "continuity.csv");
    csv << "w,mean_displacement\n";
    for (const ContinuityRow& r : rows)
      csv << format_double(r.w) << "," << format_double(r.mean_displacement) << "\n";
  }
  {
    nlohmann::json j;
    j["config_hash"] = config_hash(cfg);
    j["n_steps"] = n_steps;
    j["t_inject_index"] = t_inject;
    j["n_seeds"] = n_seeds;
    nlohmann::json jr = nlohmann::json::array();
    for (const ContinuityRow& r : rows) jr.push_back({{"w", r.w}, {"mean_displacement", r.mean_displacement}});
    j["rows"] = std::move(jr);
    std::ofstream out_json = open_out(out / "probe" / "continuity.json");
    out_json << j.dump(2) << "\n";
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  TrainedModels models = train_models(cfg);
  write_samples(cfg, models);
  ExperimentResult result = eval_metrics(cfg, models);
  export_plots(result.out_dir);
  return result;
}

}  // namespace ncx

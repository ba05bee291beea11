#include "noncross/config.hpp"

#include <cstdlib>
#include <fstream>

#include "noncross/denoiser.hpp"
#include "noncross/sampling.hpp"

namespace ncx {

namespace {

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known,
                         const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError(std::string("unknown key \"") + it.key() + "\" in " + where);
  }
}

std::uint64_t read_seed(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ConfigError("seed must be a non-negative integer");
}

}  // namespace

bool is_toy(const ExperimentConfig& cfg) { return cfg.schedule.kind == "toy_continuous"; }

void validate_config(const ExperimentConfig& cfg) {
  if (dataset_dim(cfg.dataset) != cfg.data_dim)
    throw ConfigError("data_dim does not match the dataset dimension");
  if (cfg.dataset.name == "gaussian_ring" && cfg.dataset.ring_k < 1)
    throw ConfigError("gaussian_ring needs ring_k >= 1");

  const std::string& kind = cfg.schedule.kind;
  if (kind != "linear" && kind != "cosine" && kind != "toy_continuous")
    throw ConfigError("unknown schedule kind: " + kind);
  if (kind != "toy_continuous") {
    if (cfg.schedule.T < 1) throw ConfigError("schedule T must be >= 1");
    if (kind == "linear" &&
        !(cfg.schedule.beta_start > 0.0 && cfg.schedule.beta_start <= cfg.schedule.beta_end &&
          cfg.schedule.beta_end < 1.0))
      throw ConfigError("linear schedule needs 0 < beta_start <= beta_end < 1");
  }

  arch_from_name(cfg.train.arch);
  if (cfg.train.arch == "unconditional")
    throw ConfigError("train.arch must be a conditional architecture; the baseline is built internally");
  if (cfg.train.hidden_dims.empty()) throw ConfigError("train.hidden_dims must not be empty");
  for (int h : cfg.train.hidden_dims)
    if (h < 1) throw ConfigError("train.hidden_dims entries must be >= 1");
  if (cfg.train.steps < 1) throw ConfigError("train.steps must be >= 1");
  if (cfg.train.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (!(cfg.train.lr > 0.0)) throw ConfigError("train.lr must be positive");
  if (!(cfg.train.bootstrap_p >= 0.0 && cfg.train.bootstrap_p <= 1.0))
    throw ConfigError("train.bootstrap_p must be in [0,1]");

  if (cfg.sample.strategies.empty()) throw ConfigError("sample.strategies must not be empty");
  for (const std::string& s : cfg.sample.strategies) strategy_from_name(s);
  if (cfg.sample.step_counts.empty()) throw ConfigError("sample.step_counts must not be empty");
  for (int n : cfg.sample.step_counts) {
    if (n < 1) throw ConfigError("sample.step_counts entries must be >= 1");
    if (!is_toy(cfg) && n > cfg.schedule.T)
      throw ConfigError("sample.step_counts entries must be <= schedule T");
  }
  if (cfg.sample.n_samples < 1) throw ConfigError("sample.n_samples must be >= 1");
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["dataset"] = {{"name", cfg.dataset.name}, {"ring_k", cfg.dataset.ring_k}};
  j["data_dim"] = cfg.data_dim;
  if (is_toy(cfg)) {
    j["schedule"] = {{"kind", cfg.schedule.kind}};
  } else if (cfg.schedule.kind == "cosine") {
    j["schedule"] = {{"kind", cfg.schedule.kind}, {"T", cfg.schedule.T}};
  } else {
    j["schedule"] = {{"kind", cfg.schedule.kind},
                     {"T", cfg.schedule.T},
                     {"beta_start", cfg.schedule.beta_start},
                     {"beta_end", cfg.schedule.beta_end}};
  }
  j["train"] = {{"arch", cfg.train.arch},         {"hidden_dims", cfg.train.hidden_dims},
                {"steps", cfg.train.steps},       {"batch_size", cfg.train.batch_size},
                {"lr", cfg.train.lr},             {"bootstrap_p", cfg.train.bootstrap_p},
                {"cosine_lr_decay", cfg.train.cosine_lr_decay}};
  j["sample"] = {{"strategies", cfg.sample.strategies},
                 {"step_counts", cfg.sample.step_counts},
                 {"n_samples", cfg.sample.n_samples}};
  j["seed"] = cfg.seed;
  return j;
}

std::string canonical_config_string(const ExperimentConfig& cfg) { return config_to_json(cfg).dump(2); }

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string s = config_to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

ExperimentConfig config_from_json(const nlohmann::json& j) try {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  reject_unknown_keys(j, {"dataset", "data_dim", "schedule", "train", "sample", "seed", "out_dir"}, "config");
  ExperimentConfig cfg;

  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    reject_unknown_keys(d, {"name", "ring_k"}, "dataset");
    if (d.contains("name")) cfg.dataset.name = d.at("name").get<std::string>();
    if (d.contains("ring_k")) cfg.dataset.ring_k = d.at("ring_k").get<int>();
  }
  if (j.contains("data_dim")) cfg.data_dim = j.at("data_dim").get<int>();

  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    reject_unknown_keys(s, {"kind", "T", "beta_start", "beta_end"}, "schedule");
    if (s.contains("kind")) cfg.schedule.kind = s.at("kind").get<std::string>();
    if (s.contains("T")) cfg.schedule.T = s.at("T").get<int>();
    if (s.contains("beta_start")) cfg.schedule.beta_start = s.at("beta_start").get<double>();
    if (s.contains("beta_end")) cfg.schedule.beta_end = s.at("beta_end").get<double>();
  }

  if (j.contains("train")) {
    const auto& t = j.at("train");
    reject_unknown_keys(
        t, {"arch", "hidden_dims", "steps", "batch_size", "lr", "bootstrap_p", "cosine_lr_decay"}, "train");
    if (t.contains("arch")) cfg.train.arch = t.at("arch").get<std::string>();
    if (t.contains("hidden_dims")) cfg.train.hidden_dims = t.at("hidden_dims").get<std::vector<int>>();
    if (t.contains("steps")) cfg.train.steps = t.at("steps").get<int>();
    if (t.contains("batch_size")) cfg.train.batch_size = t.at("batch_size").get<int>();
    if (t.contains("lr")) cfg.train.lr = t.at("lr").get<double>();
    if (t.contains("bootstrap_p")) cfg.train.bootstrap_p = t.at("bootstrap_p").get<double>();
    if (t.contains("cosine_lr_decay")) cfg.train.cosine_lr_decay = t.at("cosine_lr_decay").get<bool>();
  }

  if (j.contains("sample")) {
    const auto& s = j.at("sample");
    reject_unknown_keys(s, {"strategies", "step_counts", "n_samples"}, "sample");
    if (s.contains("strategies")) cfg.sample.strategies = s.at("strategies").get<std::vector<std::string>>();
    if (s.contains("step_counts")) cfg.sample.step_counts = s.at("step_counts").get<std::vector<int>>();
    if (s.contains("n_samples")) cfg.sample.n_samples = s.at("n_samples").get<int>();
  }

  if (j.contains("seed")) cfg.seed = read_seed(j.at("seed"));
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();

  if (cfg.sample.step_counts.empty()) {
    cfg.sample.step_counts =
        (cfg.schedule.kind == "toy_continuous") ? std::vector<int>{2, 5, 10, 100}
                                                : std::vector<int>{1000, 100, 50, 20, 10, 5};
  }
  validate_config(cfg);
  return cfg;
} catch (const nlohmann::json::exception& e) {
  throw ConfigError(std::string("malformed config value: ") + e.what());
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse failure in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write config file: " + path);
  out << canonical_config_string(cfg) << "\n";
  if (!out) throw IoError("short write to config file: " + path);
}

std::string resolved_out_dir(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("NONCROSS_OUT_DIR"); env && *env) return env;
  return cfg.out_dir;
}

Schedule build_schedule(const ScheduleConfig& sc) {
  if (sc.kind == "linear") return make_linear(sc.T, sc.beta_start, sc.beta_end);
  if (sc.kind == "cosine") return make_cosine(sc.T);
  throw ContractError("build_schedule: " + sc.kind + " has no discrete beta table");
}

}  // namespace ncx

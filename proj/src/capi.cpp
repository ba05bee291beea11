#include "noncross/capi.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "noncross/config.hpp"
#include "noncross/errors.hpp"
#include "noncross/experiment.hpp"
#include "noncross/plots.hpp"

struct ncx_experiment {
  ncx::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

ncx_status status_of(ncx::ErrorCode c) {
  switch (c) {
    case ncx::ErrorCode::ok: return NCX_OK;
    case ncx::ErrorCode::config: return NCX_ERR_CONFIG;
    case ncx::ErrorCode::dimension: return NCX_ERR_DIMENSION;
    case ncx::ErrorCode::contract: return NCX_ERR_CONTRACT;
    case ncx::ErrorCode::index: return NCX_ERR_INDEX;
    case ncx::ErrorCode::numeric: return NCX_ERR_NUMERIC;
    case ncx::ErrorCode::io: return NCX_ERR_IO;
    case ncx::ErrorCode::diverged: return NCX_ERR_DIVERGED;
  }
  return NCX_ERR_UNKNOWN;
}

ncx_status fail(ncx_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// runs fn, converting every escaping exception into a status code
template <typename Fn>
ncx_status guarded(Fn&& fn) {
  try {
    fn();
    return NCX_OK;
  } catch (const ncx::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(NCX_ERR_UNKNOWN, e.what());
  } catch (...) {
    return fail(NCX_ERR_UNKNOWN, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* ncx_status_name(ncx_status s) {
  switch (s) {
    case NCX_OK: return "ok";
    case NCX_ERR_CONFIG: return "config";
    case NCX_ERR_DIMENSION: return "dimension";
    case NCX_ERR_CONTRACT: return "contract";
    case NCX_ERR_INDEX: return "index";
    case NCX_ERR_NUMERIC: return "numeric";
    case NCX_ERR_IO: return "io";
    case NCX_ERR_DIVERGED: return "diverged";
    case NCX_ERR_UNKNOWN: return "unknown";
  }
  return "unknown";
}

const char* ncx_last_error(void) { return g_last_error.c_str(); }

ncx_status ncx_experiment_open(const char* config_path, ncx_experiment** out) {
  if (!config_path || !out) return fail(NCX_ERR_CONTRACT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new ncx_experiment{ncx::load_config(config_path)}; });
}

ncx_status ncx_experiment_open_json(const char* json_text, ncx_experiment** out) {
  if (!json_text || !out) return fail(NCX_ERR_CONTRACT, "null argument");
  *out = nullptr;
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      throw ncx::ConfigError(std::string("malformed config: ") + e.what());
    }
    ncx::ExperimentConfig cfg = ncx::config_from_json(j);
    ncx::validate_config(cfg);
    *out = new ncx_experiment{std::move(cfg)};
  });
}

void ncx_experiment_close(ncx_experiment* e) { delete e; }

ncx_status ncx_set_seed(ncx_experiment* e, unsigned long long seed) {
  if (!e) return fail(NCX_ERR_CONTRACT, "null experiment");
  e->cfg.seed = static_cast<std::uint64_t>(seed);
  return NCX_OK;
}

ncx_status ncx_set_out_dir(ncx_experiment* e, const char* out_dir) {
  if (!e || !out_dir) return fail(NCX_ERR_CONTRACT, "null argument");
  e->cfg.out_dir = out_dir;
  return NCX_OK;
}

ncx_status ncx_config_hash(const ncx_experiment* e, char* buf, size_t buf_len) {
  if (!e || !buf) return fail(NCX_ERR_CONTRACT, "null argument");
  return guarded([&] {
    const std::string h = ncx::config_hash(e->cfg);
    if (buf_len < h.size() + 1) throw ncx::ContractError("hash buffer needs at least 17 bytes");
    std::memcpy(buf, h.c_str(), h.size() + 1);
  });
}

ncx_status ncx_run_train(ncx_experiment* e) {
  if (!e) return fail(NCX_ERR_CONTRACT, "null experiment");
  return guarded([&] { ncx::train_models(e->cfg); });
}

ncx_status ncx_run_sample(ncx_experiment* e) {
  if (!e) return fail(NCX_ERR_CONTRACT, "null experiment");
  return guarded([&] { ncx::write_samples(e->cfg, ncx::load_models(e->cfg)); });
}

ncx_status ncx_run_eval(ncx_experiment* e) {
  if (!e) return fail(NCX_ERR_CONTRACT, "null experiment");
  return guarded([&] { ncx::eval_metrics(e->cfg, ncx::load_models(e->cfg)); });
}

ncx_status ncx_run_sweep(ncx_experiment* e) {
  if (!e) return fail(NCX_ERR_CONTRACT, "null experiment");
  return guarded([&] { ncx::run_experiment(e->cfg); });
}

ncx_status ncx_run_probe(ncx_experiment* e) {
  if (!e) return fail(NCX_ERR_CONTRACT, "null experiment");
  return guarded([&] { ncx::run_probe(e->cfg, ncx::load_models(e->cfg)); });
}

ncx_status ncx_run_plot(ncx_experiment* e) {
  if (!e) return fail(NCX_ERR_CONTRACT, "null experiment");
  return guarded([&] { ncx::export_plots(ncx::resolved_out_dir(e->cfg)); });
}

}  // extern "C"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "noncross/capi.h"
#include "noncross/config.hpp"

namespace fs = std::filesystem;

namespace {

std::string tiny_config_json(const std::string& out_dir) {
  return std::string(R"({
    "dataset": {"name": "two_gaussians"},
    "data_dim": 2,
    "schedule": {"kind": "linear", "T": 50},
    "train": {"hidden_dims": [8], "steps": 25, "batch_size": 16},
    "sample": {"step_counts": [2, 5], "n_samples": 10},
    "seed": 7,
    "out_dir": ")") +
         out_dir + "\"\n}";
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Handle {
  ncx_experiment* e = nullptr;
  ~Handle() { ncx_experiment_close(e); }
};

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("status names are stable") {
    CHECK(std::string(ncx_status_name(NCX_OK)) == "ok");
    CHECK(std::string(ncx_status_name(NCX_ERR_CONFIG)) == "config");
    CHECK(std::string(ncx_status_name(NCX_ERR_IO)) == "io");
    CHECK(std::string(ncx_status_name(NCX_ERR_DIVERGED)) == "diverged");
    CHECK(std::string(ncx_status_name(static_cast<ncx_status>(99))) == "unknown");
  }

  TEST_CASE("open_json accepts a valid config and hashes it") {
    const fs::path out = fresh_dir("ncx_capi_hash");
    Handle h;
    REQUIRE(ncx_experiment_open_json(tiny_config_json(out.string()).c_str(), &h.e) == NCX_OK);
    REQUIRE(h.e != nullptr);

    char buf[17] = {0};
    REQUIRE(ncx_config_hash(h.e, buf, sizeof buf) == NCX_OK);
    CHECK(std::strlen(buf) == 16);

    // must agree with the library-side digest of the same config
    ncx::ExperimentConfig cfg =
        ncx::config_from_json(nlohmann::json::parse(tiny_config_json(out.string())));
    CHECK(std::string(buf) == ncx::config_hash(cfg));

    char small[8];
    CHECK(ncx_config_hash(h.e, small, sizeof small) == NCX_ERR_CONTRACT);

    REQUIRE(ncx_set_seed(h.e, 8) == NCX_OK);
    char buf2[17] = {0};
    REQUIRE(ncx_config_hash(h.e, buf2, sizeof buf2) == NCX_OK);
    CHECK(std::string(buf) != std::string(buf2));
  }

  TEST_CASE("error paths set a status and a message") {
    ncx_experiment* e = nullptr;
    CHECK(ncx_experiment_open("/nonexistent/config.json", &e) == NCX_ERR_IO);
    CHECK(e == nullptr);
    CHECK(std::strlen(ncx_last_error()) > 0);

    CHECK(ncx_experiment_open_json("{not json", &e) == NCX_ERR_CONFIG);
    CHECK(e == nullptr);

    CHECK(ncx_experiment_open_json("{\"dataset\": {\"name\": \"nope\"}}", &e) == NCX_ERR_CONFIG);

    CHECK(ncx_experiment_open(nullptr, &e) == NCX_ERR_CONTRACT);
    CHECK(ncx_run_train(nullptr) == NCX_ERR_CONTRACT);
    CHECK(ncx_set_out_dir(nullptr, "x") == NCX_ERR_CONTRACT);
  }

  TEST_CASE("verbs run the pipeline end to end through the C boundary") {
    const fs::path out = fresh_dir("ncx_capi_run");
    Handle h;
    REQUIRE(ncx_experiment_open_json(tiny_config_json(out.string()).c_str(), &h.e) == NCX_OK);

    REQUIRE(ncx_run_train(h.e) == NCX_OK);
    CHECK(fs::exists(out / "checkpoints/baseline.ckpt"));
    CHECK(fs::exists(out / "checkpoints/noncross.ckpt"));

    REQUIRE(ncx_run_sample(h.e) == NCX_OK);
    CHECK(fs::exists(out / "samples.csv"));

    REQUIRE(ncx_run_eval(h.e) == NCX_OK);
    CHECK(fs::exists(out / "metrics.csv"));
    CHECK(fs::exists(out / "metrics.json"));

    REQUIRE(ncx_run_probe(h.e) == NCX_OK);
    CHECK(fs::exists(out / "probe/continuity.csv"));

    REQUIRE(ncx_run_plot(h.e) == NCX_OK);
    CHECK(fs::exists(out / "plots/ifc_vs_n.svg"));
  }

  TEST_CASE("eval without checkpoints reports an io error") {
    const fs::path out = fresh_dir("ncx_capi_nockpt");
    Handle h;
    REQUIRE(ncx_experiment_open_json(tiny_config_json(out.string()).c_str(), &h.e) == NCX_OK);
    CHECK(ncx_run_eval(h.e) == NCX_ERR_IO);
    CHECK(std::strlen(ncx_last_error()) > 0);
  }

  TEST_CASE("set_out_dir redirects every artifact") {
    const fs::path out_a = fresh_dir("ncx_capi_dir_a");
    const fs::path out_b = fresh_dir("ncx_capi_dir_b");
    Handle h;
    REQUIRE(ncx_experiment_open_json(tiny_config_json(out_a.string()).c_str(), &h.e) == NCX_OK);
    REQUIRE(ncx_set_out_dir(h.e, out_b.string().c_str()) == NCX_OK);
    REQUIRE(ncx_run_train(h.e) == NCX_OK);
    CHECK(fs::exists(out_b / "config.json"));
    CHECK_FALSE(fs::exists(out_a / "config.json"));
  }

  TEST_CASE("open from a config file on disk") {
    const fs::path out = fresh_dir("ncx_capi_file");
    const fs::path cfg_path = out / "cfg.json";
    std::ofstream(cfg_path) << tiny_config_json((out / "run").string());
    Handle h;
    REQUIRE(ncx_experiment_open(cfg_path.string().c_str(), &h.e) == NCX_OK);
    char buf[17] = {0};
    CHECK(ncx_config_hash(h.e, buf, sizeof buf) == NCX_OK);
  }
}

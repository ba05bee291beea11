#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noncross/adam.hpp"
#include "noncross/config.hpp"
#include "noncross/denoiser.hpp"

namespace ncx {

// Self-contained training snapshot. The config names the experiment; the
// arch/data_dim/hidden_dims triple identifies this particular model within it
// (the baseline and the conditioned net share one config). All integers and
// f64 payloads are little-endian on disk; save -> load -> save is
// byte-identical.
struct Checkpoint {
  std::uint32_t format_version = 1;
  std::string config_json;  // canonical form, no out_dir
  std::string arch;
  int data_dim = 0;
  std::vector<int> hidden_dims;
  std::vector<double> betas;  // empty in toy mode
  std::vector<std::string> param_names;
  std::vector<Tensor> params;
  AdamState adam;
  std::int64_t train_step = 0;
};

Checkpoint make_checkpoint(const ExperimentConfig& cfg, const Denoiser& net, const AdamState& adam,
                           const std::vector<double>& betas, std::int64_t train_step);

void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Rebuilds the net and verifies the stored name/shape table against the
// architecture before adopting the weights.
Denoiser denoiser_from_checkpoint(const Checkpoint& ck);
AdamState adam_from_checkpoint(const Checkpoint& ck);

}  // namespace ncx

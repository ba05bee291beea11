#pragma once

#include <cstdint>
#include <vector>

#include "noncross/tensor.hpp"

namespace ncx {

struct AdamState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::int64_t step_count = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState init(const std::vector<Tensor>& params, double lr);
};

// Bias-corrected Adam. The one place in the library that mutates its inputs:
// params are updated in place, state advances by one step.
void adam_step(std::vector<Tensor>& params, const std::vector<Tensor>& grads, AdamState& state);

}  // namespace ncx

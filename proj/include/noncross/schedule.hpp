#pragma once

#include <vector>

#include "noncross/tensor.hpp"

namespace ncx {

// Discrete DDPM schedule, 0-based: t runs over {0..T-1} with t = T-1 the
// noisiest step. Toy rectified-flow experiments use continuous t in [0,1]
// and never touch this type.
struct Schedule {
  int T = 0;
  std::vector<double> beta;
  std::vector<double> alpha;
  std::vector<double> alpha_bar;
  std::vector<double> sqrt_alpha_bar;
  std::vector<double> sqrt_one_minus_alpha_bar;
};

Schedule make_linear(int T, double beta_start, double beta_end);
Schedule make_cosine(int T);

// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) eps
Tensor q_sample(const Schedule& s, const Tensor& x0, const Tensor& eps, int t);
// x0 = (x_t - sqrt(1 - abar_t) eps_hat) / sqrt(abar_t)
Tensor predict_x0(const Schedule& s, const Tensor& x_t, const Tensor& eps_hat, int t);

}  // namespace ncx

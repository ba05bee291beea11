#pragma once

#include <string>
#include <vector>

#include "noncross/autodiff.hpp"
#include "noncross/rng.hpp"
#include "noncross/tensor.hpp"

namespace ncx {

enum class Arch { unconditional, concat, control_branch };

const char* arch_name(Arch a);
Arch arch_from_name(const std::string& name);

// Sinusoidal features at geometrically spaced frequencies (base 1, ratio 100),
// interleaved [sin f_j t, cos f_j t, ...]. dim must be even.
Tensor time_embedding(double t_norm, int dim);

// MLP noise/velocity predictor. The time input is a normalized scalar plus a
// 16-dim sinusoidal embedding, so the time feature block is 17 wide.
//
// concat:          one trunk on [x | cond | time]
// unconditional:   one trunk on [x | time]; rejects nonzero cond
// control_branch:  trunk on [x | time]; a same-shaped encoder chain on
//                  [cond | time] whose hidden state is added into the trunk
//                  after every hidden layer (no gating, deliberately)
struct Denoiser {
  Arch arch = Arch::concat;
  int data_dim = 0;
  std::vector<int> hidden_dims;
  int time_sin_dim = 16;
  std::vector<std::string> param_names;
  std::vector<Tensor> params;

  static Denoiser init(Arch arch, int data_dim, std::vector<int> hidden_dims, Rng& rng);

  int time_embed_dim() const { return time_sin_dim + 1; }
  int trunk_input_width() const;
  int layer_count() const { return static_cast<int>(hidden_dims.size()); }

  const Tensor& param(const std::string& name) const;
  Tensor& param(const std::string& name);

  // Batched: x and cond are [B x data_dim], t_norm has B entries in [0,1].
  Tensor forward(const Tensor& x, const Tensor& cond, const std::vector<double>& t_norm) const;
  // Single example: x and cond are [data_dim] vectors.
  Tensor forward1(const Tensor& x, const Tensor& cond, double t_norm) const;

  std::vector<Var> push_params(Tape& tape) const;
  // Same computation as forward(), but with parameters as differentiable tape
  // leaves. The assembled feature matrix enters as a constant, so nothing ever
  // backpropagates into x, cond, or t.
  Var forward_on_tape(Tape& tape, const std::vector<Var>& param_vars, const Tensor& x, const Tensor& cond,
                      const std::vector<double>& t_norm) const;
};

}  // namespace ncx

#include "noncross/denoiser.hpp"

#include <cmath>

namespace ncx {

const char* arch_name(Arch a) {
  switch (a) {
    case Arch::unconditional: return "unconditional";
    case Arch::concat: return "concat";
    case Arch::control_branch: return "control_branch";
  }
  return "?";
}

Arch arch_from_name(const std::string& name) {
  if (name == "unconditional") return Arch::unconditional;
  if (name == "concat") return Arch::concat;
  if (name == "control_branch") return Arch::control_branch;
  throw ConfigError("unknown arch: " + name);
}

Tensor time_embedding(double t_norm, int dim) {
  if (dim <= 0 || dim % 2 != 0) throw ConfigError("time_embedding: dim must be positive and even");
  const int half = dim / 2;
  Tensor out = Tensor::zeros({dim});
  for (int j = 0; j < half; ++j) {
    const double f = (half == 1) ? 1.0 : std::pow(100.0, static_cast<double>(j) / (half - 1));
    out.data[2 * j] = std::sin(f * t_norm);
    out.data[2 * j + 1] = std::cos(f * t_norm);
  }
  return out;
}

namespace {

void write_time_features(double t_norm, int sin_dim, double* dst) {
  if (!(t_norm >= 0.0 && t_norm <= 1.0)) throw ContractError("forward: t_norm outside [0,1]");
  dst[0] = t_norm;
  const Tensor emb = time_embedding(t_norm, sin_dim);
  for (int j = 0; j < sin_dim; ++j) dst[1 + j] = emb.data[j];
}

}  // namespace

int Denoiser::trunk_input_width() const {
  const int tw = time_embed_dim();
  return arch == Arch::concat ? 2 * data_dim + tw : data_dim + tw;
}

Denoiser Denoiser::init(Arch arch, int data_dim, std::vector<int> hidden_dims, Rng& rng) {
  if (data_dim < 1) throw ConfigError("denoiser: data_dim must be >= 1");
  if (hidden_dims.empty()) throw ConfigError("denoiser: need at least one hidden layer");
  Denoiser net;
  net.arch = arch;
  net.data_dim = data_dim;
  net.hidden_dims = std::move(hidden_dims);

  auto he_uniform = [&rng](int fan_in, int fan_out) {
    Tensor w = Tensor::zeros({fan_in, fan_out});
    const double limit = std::sqrt(6.0 / fan_in);
    for (double& v : w.data) v = (2.0 * rng.uniform01() - 1.0) * limit;
    return w;
  };
  auto push = [&net](const std::string& name, Tensor t) {
    net.param_names.push_back(name);
    net.params.push_back(std::move(t));
  };

  int in = net.trunk_input_width();
  for (int i = 0; i < net.layer_count(); ++i) {
    const int out = net.hidden_dims[i];
    push("w" + std::to_string(i), he_uniform(in, out));
    push("b" + std::to_string(i), Tensor::zeros({out}));
    in = out;
  }
  // zero final layer: the untrained net predicts exactly 0, which keeps the
  // early bootstrap passes inert
  push("w_out", Tensor::zeros({in, net.data_dim}));
  push("b_out", Tensor::zeros({net.data_dim}));

  if (arch == Arch::control_branch) {
    int bin = net.data_dim + net.time_embed_dim();
    for (int i = 0; i < net.layer_count(); ++i) {
      const int out = net.hidden_dims[i];
      push("v" + std::to_string(i), he_uniform(bin, out));
      push("c" + std::to_string(i), Tensor::zeros({out}));
      bin = out;
    }
  }
  return net;
}

const Tensor& Denoiser::param(const std::string& name) const {
  for (size_t i = 0; i < param_names.size(); ++i)
    if (param_names[i] == name) return params[i];
  throw ContractError("denoiser: no parameter named " + name);
}

Tensor& Denoiser::param(const std::string& name) {
  for (size_t i = 0; i < param_names.size(); ++i)
    if (param_names[i] == name) return params[i];
  throw ContractError("denoiser: no parameter named " + name);
}

std::vector<Var> Denoiser::push_params(Tape& tape) const {
  std::vector<Var> vars;
  vars.reserve(params.size());
  for (const Tensor& p : params) vars.push_back(tape.input(p, true));
  return vars;
}

Var Denoiser::forward_on_tape(Tape& tape, const std::vector<Var>& pv, const Tensor& x, const Tensor& cond,
                              const std::vector<double>& t_norm) const {
  if (!x.is_matrix() || x.cols() != data_dim) throw DimensionError("forward: x must be [B x data_dim]");
  if (!cond.same_shape(x)) throw DimensionError("forward: cond shape must match x");
  const int B = x.rows();
  if (static_cast<int>(t_norm.size()) != B) throw DimensionError("forward: t_norm length must equal batch size");
  if (pv.size() != params.size()) throw ContractError("forward: wrong parameter var count");
  if (arch == Arch::unconditional) {
    for (double v : cond.data)
      if (v != 0.0) throw ContractError("forward: unconditional arch given a nonzero condition");
  }

  const int tw = time_embed_dim();
  Tensor tfeat = Tensor::zeros({B, tw});
  for (int i = 0; i < B; ++i) write_time_features(t_norm[i], time_sin_dim, &tfeat.data[static_cast<size_t>(i) * tw]);

  Tensor trunk_in = (arch == Arch::concat) ? hstack({&x, &cond, &tfeat}) : hstack({&x, &tfeat});
  Var h = tape.input(std::move(trunk_in), false);

  const int L = layer_count();
  auto idx = [this](const std::string& name) {
    for (size_t i = 0; i < param_names.size(); ++i)
      if (param_names[i] == name) return static_cast<int>(i);
    throw ContractError("denoiser: no parameter named " + name);
  };

  Var g;
  if (arch == Arch::control_branch) g = tape.input(hstack({&cond, &tfeat}), false);

  for (int i = 0; i < L; ++i) {
    const std::string si = std::to_string(i);
    h = tape.silu(tape.add_row(tape.matmul(h, pv[idx("w" + si)]), pv[idx("b" + si)]));
    if (arch == Arch::control_branch) {
      g = tape.silu(tape.add_row(tape.matmul(g, pv[idx("v" + si)]), pv[idx("c" + si)]));
      h = tape.add(h, g);
    }
  }
  return tape.add_row(tape.matmul(h, pv[idx("w_out")]), pv[idx("b_out")]);
}

Tensor Denoiser::forward(const Tensor& x, const Tensor& cond, const std::vector<double>& t_norm) const {
  Tape tape;
  std::vector<Var> pv = push_params(tape);
  Var out = forward_on_tape(tape, pv, x, cond, t_norm);
  return tape.value(out);
}

Tensor Denoiser::forward1(const Tensor& x, const Tensor& cond, double t_norm) const {
  if (x.shape.size() != 1 || x.shape[0] != data_dim) throw DimensionError("forward1: x must be [data_dim]");
  if (!cond.same_shape(x)) throw DimensionError("forward1: cond shape must match x");
  Tensor xm({1, data_dim}, x.data);
  Tensor cm({1, data_dim}, cond.data);
  Tensor out = forward(xm, cm, {t_norm});
  return extract_row(out, 0);
}

}  // namespace ncx

#include "noncross/checkpoint.hpp"

#include <bit>
#include <fstream>

namespace ncx {

namespace {

constexpr char kMagic[8] = {'N', 'C', 'X', 'C', 'K', 'P', '0', '1'};

void put_u8(std::string& b, std::uint8_t v) { b.push_back(static_cast<char>(v)); }

void put_u16(std::string& b, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_i64(std::string& b, std::int64_t v) { put_u64(b, static_cast<std::uint64_t>(v)); }

void put_f64(std::string& b, double v) { put_u64(b, std::bit_cast<std::uint64_t>(v)); }

struct Reader {
  const std::string& buf;
  size_t pos = 0;

  void need(size_t n) const {
    if (pos + n > buf.size()) throw IoError("truncated checkpoint");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf[pos++]);
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string bytes(size_t n) {
    need(n);
    std::string s = buf.substr(pos, n);
    pos += n;
    return s;
  }
};

void put_tensor_data(std::string& b, const Tensor& t) {
  for (double v : t.data) put_f64(b, v);
}

}  // namespace

Checkpoint make_checkpoint(const ExperimentConfig& cfg, const Denoiser& net, const AdamState& adam,
                           const std::vector<double>& betas, std::int64_t train_step) {
  Checkpoint ck;
  ck.config_json = canonical_config_string(cfg);
  ck.arch = arch_name(net.arch);
  ck.data_dim = net.data_dim;
  ck.hidden_dims = net.hidden_dims;
  ck.betas = betas;
  ck.param_names = net.param_names;
  ck.params = net.params;
  ck.adam = adam;
  ck.train_step = train_step;
  return ck;
}

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
  if (ck.params.size() != ck.param_names.size()) throw ContractError("checkpoint: name/param count mismatch");
  if (ck.adam.m.size() != ck.params.size() || ck.adam.v.size() != ck.params.size())
    throw ContractError("checkpoint: optimizer state does not cover the parameters");

  std::string b;
  b.append(kMagic, sizeof kMagic);
  put_u32(b, ck.format_version);
  put_u64(b, ck.config_json.size());
  b += ck.config_json;
  put_u16(b, static_cast<std::uint16_t>(ck.arch.size()));
  b += ck.arch;
  put_u32(b, static_cast<std::uint32_t>(ck.data_dim));
  put_u16(b, static_cast<std::uint16_t>(ck.hidden_dims.size()));
  for (int h : ck.hidden_dims) put_u32(b, static_cast<std::uint32_t>(h));
  put_u64(b, ck.betas.size());
  for (double v : ck.betas) put_f64(b, v);

  put_u32(b, static_cast<std::uint32_t>(ck.params.size()));
  for (size_t i = 0; i < ck.params.size(); ++i) {
    const std::string& name = ck.param_names[i];
    const Tensor& t = ck.params[i];
    put_u16(b, static_cast<std::uint16_t>(name.size()));
    b += name;
    put_u8(b, static_cast<std::uint8_t>(t.shape.size()));
    for (int d : t.shape) put_i64(b, d);
    put_tensor_data(b, t);
  }

  put_u64(b, ck.adam.step_count);
  put_f64(b, ck.adam.lr);
  put_f64(b, ck.adam.beta1);
  put_f64(b, ck.adam.beta2);
  put_f64(b, ck.adam.eps);
  for (const Tensor& m : ck.adam.m) put_tensor_data(b, m);
  for (const Tensor& v : ck.adam.v) put_tensor_data(b, v);
  put_i64(b, ck.train_step);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  out.write(b.data(), static_cast<std::streamsize>(b.size()));
  if (!out) throw IoError("short write to checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r{buf};

  if (r.bytes(sizeof kMagic) != std::string(kMagic, sizeof kMagic))
    throw IoError("not a checkpoint file: " + path);
  Checkpoint ck;
  ck.format_version = r.u32();
  if (ck.format_version != 1) throw IoError("unsupported checkpoint version");
  ck.config_json = r.bytes(r.u64());
  ck.arch = r.bytes(r.u16());
  ck.data_dim = static_cast<int>(r.u32());
  const int nh = r.u16();
  ck.hidden_dims.resize(nh);
  for (int i = 0; i < nh; ++i) ck.hidden_dims[i] = static_cast<int>(r.u32());
  const std::uint64_t nb = r.u64();
  ck.betas.resize(nb);
  for (std::uint64_t i = 0; i < nb; ++i) ck.betas[i] = r.f64();

  const std::uint32_t np = r.u32();
  for (std::uint32_t i = 0; i < np; ++i) {
    ck.param_names.push_back(r.bytes(r.u16()));
    const int ndim = r.u8();
    std::vector<int> shape(ndim);
    std::int64_t numel = 1;
    for (int k = 0; k < ndim; ++k) {
      shape[k] = static_cast<int>(r.i64());
      numel *= shape[k];
    }
    Tensor t = Tensor::zeros(shape);
    for (std::int64_t k = 0; k < numel; ++k) t.data[k] = r.f64();
    ck.params.push_back(std::move(t));
  }

  ck.adam.step_count = static_cast<std::int64_t>(r.u64());
  ck.adam.lr = r.f64();
  ck.adam.beta1 = r.f64();
  ck.adam.beta2 = r.f64();
  ck.adam.eps = r.f64();
  for (const Tensor& p : ck.params) {
    Tensor m = Tensor::zeros(p.shape);
    for (auto& v : m.data) v = r.f64();
    ck.adam.m.push_back(std::move(m));
  }
  for (const Tensor& p : ck.params) {
    Tensor v = Tensor::zeros(p.shape);
    for (auto& x : v.data) x = r.f64();
    ck.adam.v.push_back(std::move(v));
  }
  ck.train_step = r.i64();
  if (r.pos != buf.size()) throw IoError("trailing bytes in checkpoint: " + path);
  return ck;
}

Denoiser denoiser_from_checkpoint(const Checkpoint& ck) {
  Rng scratch(0);
  Denoiser net = Denoiser::init(arch_from_name(ck.arch), ck.data_dim, ck.hidden_dims, scratch);
  if (net.param_names != ck.param_names)
    throw ContractError("checkpoint parameter table does not match the architecture");
  for (size_t i = 0; i < net.params.size(); ++i) {
    if (!net.params[i].same_shape(ck.params[i]))
      throw ContractError("checkpoint shape mismatch for " + ck.param_names[i]);
    net.params[i] = ck.params[i];
  }
  return net;
}

AdamState adam_from_checkpoint(const Checkpoint& ck) {
  for (size_t i = 0; i < ck.params.size(); ++i)
    if (!ck.adam.m[i].same_shape(ck.params[i]) || !ck.adam.v[i].same_shape(ck.params[i]))
      throw ContractError("checkpoint optimizer state shape mismatch");
  return ck.adam;
}

}  // namespace ncx

#include "noncross/metrics.hpp"

#include <cmath>

namespace ncx {

double psnr(const Tensor& a, const Tensor& b, double data_range) {
  if (!a.same_shape(b)) throw DimensionError("psnr: shapes differ");
  if (!(data_range > 0.0)) throw ContractError("psnr: data_range must be positive");
  const double mse = squared_distance(a, b) / static_cast<double>(a.size());
  if (mse < 1e-12) return kPsnrCap;
  return 10.0 * std::log10(data_range * data_range / mse);
}

double ifc(const Trajectory& traj, double data_range) {
  if (traj.x0_preds.empty()) throw ContractError("ifc: empty trajectory");
  double acc = 0.0;
  for (const Tensor& x0 : traj.x0_preds) acc += psnr(x0, traj.final, data_range);
  return acc / static_cast<double>(traj.x0_preds.size());
}

std::vector<double> ifc_per_chain(const BatchTrajectory& traj, double data_range) {
  if (traj.x0_preds.empty()) throw ContractError("ifc: empty trajectory");
  if (!(data_range > 0.0)) throw ContractError("ifc: data_range must be positive");
  const int B = traj.n_chains();
  const int d = traj.finals.cols();
  const int N = traj.n_steps();
  std::vector<double> out(B, 0.0);
  for (int k = 0; k < N; ++k) {
    const Tensor& x0 = traj.x0_preds[k];
    for (int i = 0; i < B; ++i) {
      double se = 0.0;
      for (int j = 0; j < d; ++j) {
        const double diff = x0.at(i, j) - traj.finals.at(i, j);
        se += diff * diff;
      }
      const double mse = se / d;
      out[i] += (mse < 1e-12) ? kPsnrCap : 10.0 * std::log10(data_range * data_range / mse);
    }
  }
  for (double& v : out) v /= N;
  return out;
}

namespace {

bool is_ood(const double* p, int d, const std::vector<Tensor>& modes, double radius) {
  const double r2 = radius * radius;
  for (const Tensor& m : modes) {
    double d2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double diff = p[j] - m.data[j];
      d2 += diff * diff;
    }
    if (d2 <= r2) return false;
  }
  return true;
}

}  // namespace

double ood_rate(const std::vector<Tensor>& samples, const std::vector<Tensor>& modes, double radius) {
  if (samples.empty()) throw ContractError("ood_rate: empty sample set");
  if (modes.empty()) throw ContractError("ood_rate: no modes");
  if (!(radius > 0.0)) throw ContractError("ood_rate: radius must be positive");
  const int d = static_cast<int>(samples[0].size());
  int n_ood = 0;
  for (const Tensor& s : samples) {
    if (static_cast<int>(s.size()) != d) throw DimensionError("ood_rate: inconsistent sample dims");
    if (is_ood(s.data.data(), d, modes, radius)) ++n_ood;
  }
  return static_cast<double>(n_ood) / static_cast<double>(samples.size());
}

double ood_rate(const Tensor& samples, const std::vector<Tensor>& modes, double radius) {
  if (!samples.is_matrix() || samples.rows() < 1) throw ContractError("ood_rate: empty sample set");
  if (modes.empty()) throw ContractError("ood_rate: no modes");
  if (!(radius > 0.0)) throw ContractError("ood_rate: radius must be positive");
  const int d = samples.cols();
  int n_ood = 0;
  for (int i = 0; i < samples.rows(); ++i)
    if (is_ood(&samples.data[static_cast<size_t>(i) * d], d, modes, radius)) ++n_ood;
  return static_cast<double>(n_ood) / static_cast<double>(samples.rows());
}

NoiseDistanceResult noise_distance_check(int dim, int n_pairs, Rng& rng) {
  if (dim < 1) throw ContractError("noise_distance_check: dim must be >= 1");
  if (n_pairs < 1) throw ContractError("noise_distance_check: n_pairs must be >= 1");
  double s1 = 0.0, s2 = 0.0;
  for (int p = 0; p < n_pairs; ++p) {
    double acc = 0.0;
    for (int j = 0; j < dim; ++j) {
      const double diff = rng.normal() - rng.normal();
      acc += diff * diff;
    }
    s1 += acc;
    s2 += acc * acc;
  }
  NoiseDistanceResult r;
  r.sample_mean = s1 / n_pairs;
  r.expected = 2.0 * dim;
  const double var = s2 / n_pairs - r.sample_mean * r.sample_mean;
  r.standard_error = std::sqrt(var / n_pairs);
  return r;
}

Tensor perturb_noise(const Tensor& eps, const Tensor& eps_p, double w) {
  if (!eps.same_shape(eps_p)) throw DimensionError("perturb_noise: shapes differ");
  if (!(w >= 0.0)) throw ContractError("perturb_noise: w must be >= 0");
  const double s = 1.0 / std::sqrt(1.0 + w * w);
  Tensor out = eps;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = (eps.data[i] + w * eps_p.data[i]) * s;
  return out;
}

namespace {

constexpr std::uint64_t kProbeChainTag = 0x70726f62;
constexpr std::uint64_t kProbeNoiseTag = 0x70657274;

// One full grid traversal; when inject_w >= 0 the re-noising term at
// t_inject_index is perturbed while everything else stays clean.
Tensor run_injected(const Denoiser& net, const Schedule& sched, Strategy strategy, const std::vector<int>& grid,
                    const Tensor& x_init, const Tensor& eps_p, int t_inject_index, double inject_w) {
  const int B = x_init.rows();
  const int d = x_init.cols();
  const int N = static_cast<int>(grid.size());
  Tensor x = x_init;
  Tensor eps_prev = Tensor::zeros({B, d});
  for (int i = 0; i < N; ++i) {
    const int t = grid[i];
    const std::vector<double> t_norm(B, static_cast<double>(t) / sched.T);
    Tensor cond = Tensor::zeros({B, d});
    if (i > 0) {
      switch (strategy) {
        case Strategy::zero: break;
        case Strategy::groundtruth_eps: cond = x_init; break;
        case Strategy::prev_step_pred: cond = eps_prev; break;
        case Strategy::current_step_pred: cond = net.forward(x, Tensor::zeros({B, d}), t_norm); break;
      }
    }
    Tensor eps_hat = net.forward(x, cond, t_norm);
    Tensor x0 = predict_x0(sched, x, eps_hat, t);
    if (i + 1 < N) {
      const Tensor& renoise =
          (i == t_inject_index && inject_w >= 0.0) ? perturb_noise(eps_hat, eps_p, inject_w) : eps_hat;
      const int t_prev = grid[i + 1];
      const double a = sched.sqrt_alpha_bar[t_prev];
      const double b = sched.sqrt_one_minus_alpha_bar[t_prev];
      Tensor next = x0;
      for (size_t k = 0; k < next.data.size(); ++k) next.data[k] = a * x0.data[k] + b * renoise.data[k];
      x = std::move(next);
    } else {
      x = std::move(x0);
    }
    eps_prev = std::move(eps_hat);
  }
  return x;
}

}  // namespace

std::vector<ContinuityRow> continuity_probe(const Denoiser& net, const Schedule& sched, Strategy strategy,
                                            int n_steps, int t_inject_index, const std::vector<double>& weights,
                                            int n_seeds, std::uint64_t seed) {
  if (weights.empty()) throw ContractError("continuity_probe: empty weight list");
  if (n_seeds < 1) throw ContractError("continuity_probe: n_seeds must be >= 1");
  const std::vector<int> grid = ddim_time_grid(sched.T, n_steps);
  if (t_inject_index < 0 || t_inject_index >= static_cast<int>(grid.size()))
    throw ContractError("continuity_probe: t_inject outside the step grid");

  const int d = net.data_dim;
  Tensor x_init = Tensor::zeros({n_seeds, d});
  Tensor eps_p = Tensor::zeros({n_seeds, d});
  for (int i = 0; i < n_seeds; ++i) {
    Rng rc(Rng::derive(seed, kProbeChainTag, static_cast<std::uint64_t>(i)));
    for (int j = 0; j < d; ++j) x_init.at(i, j) = rc.normal();
    Rng rp(Rng::derive(seed, kProbeNoiseTag, static_cast<std::uint64_t>(i)));
    for (int j = 0; j < d; ++j) eps_p.at(i, j) = rp.normal();
  }

  const Tensor clean = run_injected(net, sched, strategy, grid, x_init, eps_p, -1, -1.0);
  std::vector<ContinuityRow> rows;
  rows.reserve(weights.size());
  for (double w : weights) {
    const Tensor pert = run_injected(net, sched, strategy, grid, x_init, eps_p, t_inject_index, w);
    double acc = 0.0;
    for (int i = 0; i < n_seeds; ++i) {
      double d2 = 0.0;
      for (int j = 0; j < d; ++j) {
        const double diff = pert.at(i, j) - clean.at(i, j);
        d2 += diff * diff;
      }
      acc += std::sqrt(d2);
    }
    rows.push_back({w, acc / n_seeds});
  }
  return rows;
}

double fidelity_proxy(const Tensor& samples, const Tensor& reference) {
  if (!samples.is_matrix() || !reference.is_matrix()) throw DimensionError("fidelity_proxy: expected [n x d] matrices");
  if (samples.cols() != reference.cols()) throw DimensionError("fidelity_proxy: dims differ");
  const int n = samples.rows();
  const int m = reference.rows();
  if (n < 1 || m < 1) throw ContractError("fidelity_proxy: empty set");
  const int d = samples.cols();

  auto mean_cross = [d](const Tensor& a, const Tensor& b) {
    double acc = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
      const double* pa = &a.data[static_cast<size_t>(i) * d];
      for (int j = 0; j < b.rows(); ++j) {
        const double* pb = &b.data[static_cast<size_t>(j) * d];
        double d2 = 0.0;
        for (int k = 0; k < d; ++k) {
          const double diff = pa[k] - pb[k];
          d2 += diff * diff;
        }
        acc += std::sqrt(d2);
      }
    }
    return acc / (static_cast<double>(a.rows()) * static_cast<double>(b.rows()));
  };

  const double a = mean_cross(samples, reference);
  const double b = mean_cross(samples, samples);
  const double c = mean_cross(reference, reference);
  return 2.0 * a - b - c;
}

double data_range_of(const Tensor& reference) {
  if (!reference.is_matrix() || reference.rows() < 1) throw ContractError("data_range_of: empty reference");
  const int d = reference.cols();
  double best = 0.0;
  for (int j = 0; j < d; ++j) {
    double lo = reference.at(0, j), hi = reference.at(0, j);
    for (int i = 1; i < reference.rows(); ++i) {
      const double v = reference.at(i, j);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    best = std::max(best, hi - lo);
  }
  return std::max(best, 1e-6);
}

}  // namespace ncx

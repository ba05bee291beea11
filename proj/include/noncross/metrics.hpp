#pragma once

#include <string>
#include <vector>

#include "noncross/rng.hpp"
#include "noncross/sampling.hpp"

namespace ncx {

struct MetricReport {
  double ifc = 0.0;
  double ood_rate = 0.0;
  double fidelity = 0.0;
  int n_samples = 0;
  std::string config_hash;
};

// 10*log10(range^2 / MSE), capped at 100 dB when MSE < 1e-12.
constexpr double kPsnrCap = 100.0;
double psnr(const Tensor& a, const Tensor& b, double data_range);

// Mean PSNR between each step's x0 estimate and the final sample.
double ifc(const Trajectory& traj, double data_range);
std::vector<double> ifc_per_chain(const BatchTrajectory& traj, double data_range);

// Fraction of samples farther than radius from every mode.
double ood_rate(const std::vector<Tensor>& samples, const std::vector<Tensor>& modes, double radius);
double ood_rate(const Tensor& samples, const std::vector<Tensor>& modes, double radius);

struct NoiseDistanceResult {
  double sample_mean = 0.0;
  double expected = 0.0;
  double standard_error = 0.0;
};
// Monte Carlo check of E||n1 - n2||^2 = 2*dim for standard normal pairs.
NoiseDistanceResult noise_distance_check(int dim, int n_pairs, Rng& rng);

// (eps + w*eps_p) / sqrt(1 + w^2); unit-variance preserving for independent
// standard normal inputs.
Tensor perturb_noise(const Tensor& eps, const Tensor& eps_p, double w);

struct ContinuityRow {
  double w = 0.0;
  double mean_displacement = 0.0;
};
// Paired samplings, identical except that at grid step t_inject_index the
// re-noising term uses perturb_noise(eps_hat, eps_p, w). The x0 estimate and
// any condition carryover keep the clean eps_hat; only the re-injected noise
// is shifted. Displacement is ||final_perturbed - final_clean|| averaged over
// n_seeds independent chains.
std::vector<ContinuityRow> continuity_probe(const Denoiser& net, const Schedule& sched, Strategy strategy,
                                            int n_steps, int t_inject_index, const std::vector<double>& weights,
                                            int n_seeds, std::uint64_t seed);

// Energy distance (V-statistic) between two empirical distributions given as
// [n x d] and [m x d]; exactly zero for identical multisets.
double fidelity_proxy(const Tensor& samples, const Tensor& reference);

// Largest per-coordinate spread of the reference set, clamped below at 1e-6;
// the PSNR range used by IFC on vector data.
double data_range_of(const Tensor& reference);

}  // namespace ncx

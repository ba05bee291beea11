#include "noncross/schedule.hpp"

#include <cmath>

namespace ncx {

namespace {

constexpr double kAlphaBarFloor = 1e-12;

Schedule finalize_from_betas(std::vector<double> beta) {
  Schedule s;
  s.T = static_cast<int>(beta.size());
  s.beta = std::move(beta);
  s.alpha.resize(s.T);
  s.alpha_bar.resize(s.T);
  s.sqrt_alpha_bar.resize(s.T);
  s.sqrt_one_minus_alpha_bar.resize(s.T);
  double prod = 1.0;
  for (int t = 0; t < s.T; ++t) {
    if (!(s.beta[t] > 0.0 && s.beta[t] < 1.0)) throw ConfigError("schedule: beta out of (0,1) at t=" + std::to_string(t));
    s.alpha[t] = 1.0 - s.beta[t];
    prod *= s.alpha[t];
    s.alpha_bar[t] = prod;
    s.sqrt_alpha_bar[t] = std::sqrt(prod);
    s.sqrt_one_minus_alpha_bar[t] = std::sqrt(1.0 - prod);
  }
  return s;
}

void check_time(const Schedule& s, int t, const char* what) {
  if (t < 0 || t >= s.T) throw IndexError(std::string(what) + ": t=" + std::to_string(t) + " outside {0.." + std::to_string(s.T - 1) + "}");
}

}  // namespace

Schedule make_linear(int T, double beta_start, double beta_end) {
  if (T < 1) throw ConfigError("make_linear: T must be >= 1");
  if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0))
    throw ConfigError("make_linear: need 0 < beta_start <= beta_end < 1");
  std::vector<double> beta(T);
  if (T == 1) {
    beta[0] = beta_start;
  } else {
    for (int t = 0; t < T; ++t)
      beta[t] = beta_start + (beta_end - beta_start) * static_cast<double>(t) / static_cast<double>(T - 1);
  }
  return finalize_from_betas(std::move(beta));
}

Schedule make_cosine(int T) {
  if (T < 1) throw ConfigError("make_cosine: T must be >= 1");
  // squared-cosine alpha_bar profile with the usual 0.008 offset; betas derived
  // from successive ratios and clipped at 0.999, then alpha_bar rebuilt as an
  // exact cumulative product of the clipped alphas
  const double s = 0.008;
  const double pi_half = std::acos(0.0);
  auto f = [&](double u) {
    const double c = std::cos((u / T + s) / (1.0 + s) * pi_half);
    return c * c;
  };
  const double f0 = f(0.0);
  std::vector<double> beta(T);
  double prev = f0;
  for (int t = 0; t < T; ++t) {
    const double cur = f(static_cast<double>(t + 1));
    double b = 1.0 - cur / prev;
    if (b > 0.999) b = 0.999;
    if (b < 1e-12) b = 1e-12;
    beta[t] = b;
    prev = cur;
  }
  return finalize_from_betas(std::move(beta));
}

Tensor q_sample(const Schedule& s, const Tensor& x0, const Tensor& eps, int t) {
  check_time(s, t, "q_sample");
  if (!x0.same_shape(eps)) throw DimensionError("q_sample: x0 and eps shapes differ");
  const double a = s.sqrt_alpha_bar[t];
  const double b = s.sqrt_one_minus_alpha_bar[t];
  Tensor out = x0;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = a * x0.data[i] + b * eps.data[i];
  return out;
}

Tensor predict_x0(const Schedule& s, const Tensor& x_t, const Tensor& eps_hat, int t) {
  check_time(s, t, "predict_x0");
  if (!x_t.same_shape(eps_hat)) throw DimensionError("predict_x0: x_t and eps_hat shapes differ");
  if (s.alpha_bar[t] < kAlphaBarFloor) throw NumericError("predict_x0: alpha_bar too small at t=" + std::to_string(t));
  const double a = s.sqrt_alpha_bar[t];
  const double b = s.sqrt_one_minus_alpha_bar[t];
  Tensor out = x_t;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = (x_t.data[i] - b * eps_hat.data[i]) / a;
  return out;
}

}  // namespace ncx

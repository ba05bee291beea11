#include "noncross/dataset.hpp"

#include <cmath>

namespace ncx {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kPairTag = 0x70616972;  // substream tag for dataset pairs

enum class Kind { two_gaussians, gaussian_ring, moons };

Kind kind_of(const DatasetSpec& spec) {
  if (spec.name == "two_gaussians") return Kind::two_gaussians;
  if (spec.name == "gaussian_ring") return Kind::gaussian_ring;
  if (spec.name == "moons") return Kind::moons;
  throw ConfigError("unknown dataset: " + spec.name);
}

// moons arcs before noise: the classic pair of interleaved half circles,
// recentred and doubled so the figure spans roughly [-3,3] x [-1.5,1.5]
Tensor moon_point(int moon, double theta) {
  double x, y;
  if (moon == 0) {
    x = std::cos(theta);
    y = std::sin(theta);
  } else {
    x = 1.0 - std::cos(theta);
    y = 0.5 - std::sin(theta);
  }
  return Tensor({2}, {(x - 0.5) * 2.0, (y - 0.25) * 2.0});
}

}  // namespace

int dataset_dim(const DatasetSpec& spec) {
  kind_of(spec);
  return 2;
}

std::vector<Tensor> dataset_modes(const DatasetSpec& spec) {
  switch (kind_of(spec)) {
    case Kind::two_gaussians:
      return {Tensor({2}, {-2.0, 0.0}), Tensor({2}, {2.0, 0.0})};
    case Kind::gaussian_ring: {
      if (spec.ring_k < 1) throw ConfigError("gaussian_ring: k must be >= 1");
      std::vector<Tensor> modes;
      for (int j = 0; j < spec.ring_k; ++j) {
        const double a = 2.0 * kPi * j / spec.ring_k;
        modes.push_back(Tensor({2}, {2.0 * std::cos(a), 2.0 * std::sin(a)}));
      }
      return modes;
    }
    case Kind::moons: {
      // dense arc samples stand in for mode centers when counting OOD
      std::vector<Tensor> modes;
      for (int moon = 0; moon < 2; ++moon)
        for (int i = 0; i < 16; ++i) modes.push_back(moon_point(moon, (i + 0.5) * kPi / 16.0));
      return modes;
    }
  }
  throw ConfigError("unreachable");
}

double dataset_mode_sigma(const DatasetSpec& spec) {
  switch (kind_of(spec)) {
    case Kind::two_gaussians:
    case Kind::gaussian_ring:
      return 0.2;
    case Kind::moons:
      return 0.2;  // 0.1 arc noise, doubled by the global scale
  }
  throw ConfigError("unreachable");
}

Tensor draw_x0(const DatasetSpec& spec, Rng& rng) {
  switch (kind_of(spec)) {
    case Kind::two_gaussians: {
      const double u = rng.uniform01();
      const double cx = u < 0.5 ? -2.0 : 2.0;
      return Tensor({2}, {cx + 0.2 * rng.normal(), 0.2 * rng.normal()});
    }
    case Kind::gaussian_ring: {
      if (spec.ring_k < 1) throw ConfigError("gaussian_ring: k must be >= 1");
      const int j = rng.uniform_int(spec.ring_k);
      const double a = 2.0 * kPi * j / spec.ring_k;
      return Tensor({2}, {2.0 * std::cos(a) + 0.2 * rng.normal(), 2.0 * std::sin(a) + 0.2 * rng.normal()});
    }
    case Kind::moons: {
      const int moon = rng.uniform01() < 0.5 ? 0 : 1;
      const double theta = rng.uniform01() * kPi;
      Tensor p = moon_point(moon, theta);
      p.data[0] += 0.2 * rng.normal();
      p.data[1] += 0.2 * rng.normal();
      return p;
    }
  }
  throw ConfigError("unreachable");
}

FlowPair draw_pair(const DatasetSpec& spec, Rng& rng) {
  FlowPair pair;
  pair.x0 = draw_x0(spec, rng);
  pair.x1 = Tensor::zeros({dataset_dim(spec)});
  rng.fill_normal(pair.x1);
  return pair;
}

std::vector<FlowPair> generate_dataset(const DatasetSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("generate_dataset: n must be >= 1");
  std::vector<FlowPair> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Rng rng(Rng::derive(seed, kPairTag, static_cast<std::uint64_t>(i)));
    out.push_back(draw_pair(spec, rng));
  }
  return out;
}

}  // namespace ncx

#pragma once

#include <cmath>
#include <cstdint>

#include "noncross/tensor.hpp"

namespace ncx {

// splitmix64 output mix; also used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace detail {

struct ZigTables {
  // 128-strip ziggurat for the standard normal.
  double x[129];
  double r[128];
  ZigTables() {
    const double R = 3.442619855899;
    const double V = 9.91256303526217e-3;
    x[0] = V / std::exp(-0.5 * R * R);
    x[1] = R;
    x[128] = 0.0;
    for (int i = 2; i < 128; ++i)
      x[i] = std::sqrt(-2.0 * std::log(V / x[i - 1] + std::exp(-0.5 * x[i - 1] * x[i - 1])));
    for (int i = 0; i < 128; ++i) r[i] = x[i + 1] / x[i];
  }
};

inline const ZigTables zig{};

}  // namespace detail

// xoshiro256++ with explicit seeding. Every stochastic routine takes one of
// these by reference; nothing in the library touches global RNG state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (int i = 0; i < 4; ++i) s_[i] = splitmix64(sm);
  }

  // Mixes (seed, a, b, c) into a fresh stream seed. Used for per-example and
  // per-chain substreams so batch order and parallel fan-out cannot change results.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t sm = seed ^ 0x6e6f6e63726f7373ULL;
    std::uint64_t z = splitmix64(sm);
    sm = z + a;
    z = splitmix64(sm);
    sm = z + b;
    z = splitmix64(sm);
    sm = z + c;
    return splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // {0, .., n-1}
  int uniform_int(int n) { return static_cast<int>(uniform01() * n); }

  double normal() {
    for (;;) {
      const std::uint64_t bits = next_u64();
      // low 7 bits pick the strip, high 53 give the uniform; disjoint, so independent
      const double u = 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
      const unsigned i = static_cast<unsigned>(bits & 0x7f);
      if (std::fabs(u) < detail::zig.r[i]) return u * detail::zig.x[i];
      if (i == 0) return normal_tail(u < 0.0);
      const double x = u * detail::zig.x[i];
      const double f0 = std::exp(-0.5 * (detail::zig.x[i] * detail::zig.x[i] - x * x));
      const double f1 = std::exp(-0.5 * (detail::zig.x[i + 1] * detail::zig.x[i + 1] - x * x));
      if (f1 + uniform01() * (f0 - f1) < 1.0) return x;
    }
  }

  void fill_normal(Tensor& t) {
    for (double& v : t.data) v = normal();
  }

  void fill_uniform01(Tensor& t) {
    for (double& v : t.data) v = uniform01();
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  double normal_tail(bool negative) {
    const double R = 3.442619855899;
    for (;;) {
      const double u1 = uniform01();
      const double u2 = uniform01();
      if (u1 <= 0.0 || u2 <= 0.0) continue;
      const double x = std::log(u1) / R;
      const double y = std::log(u2);
      if (-2.0 * y >= x * x) return negative ? x - R : R - x;
    }
  }

  std::uint64_t s_[4];
};

}  // namespace ncx

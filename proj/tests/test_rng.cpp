#include <doctest.h>

#include <cmath>

#include "noncross/rng.hpp"

using namespace ncx;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived substreams differ") {
  Rng a(Rng::derive(7, 0, 0)), b(Rng::derive(7, 0, 1)), c(Rng::derive(7, 1, 0));
  bool ab = false, ac = false;
  for (int i = 0; i < 16; ++i) {
    std::uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
    ab |= (va != vb);
    ac |= (va != vc);
  }
  CHECK(ab);
  CHECK(ac);
  CHECK(Rng::derive(7, 3, 4) == Rng::derive(7, 3, 4));
}

TEST_CASE("uniform01 stays in [0,1)") {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal moments within 4 standard errors") {
  Rng rng(1234);
  const int n = 200000;
  double s1 = 0, s2 = 0, s4 = 0;
  int above1 = 0, below_m196 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s1 += x;
    s2 += x * x;
    s4 += x * x * x * x;
    if (x > 1.0) ++above1;
    if (x < -1.96) ++below_m196;
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  const double m4 = s4 / n;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));          // se(mean)=1/sqrt(n)
  CHECK(std::fabs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));                    // se(var)~sqrt(2/n)
  CHECK(std::fabs(m4 - 3.0) < 4.0 * std::sqrt(96.0 / n));                    // var(x^4)=105-9=96
  const double p1 = 0.15865525393145705;                                     // P(X>1)
  CHECK(std::fabs(static_cast<double>(above1) / n - p1) < 4.0 * std::sqrt(p1 * (1 - p1) / n));
  const double p2 = 0.024997895148220435;                                    // P(X<-1.96)
  CHECK(std::fabs(static_cast<double>(below_m196) / n - p2) < 4.0 * std::sqrt(p2 * (1 - p2) / n));
}

TEST_CASE("normal tail region is populated and symmetric-ish") {
  Rng rng(99);
  const int n = 2000000;
  int above = 0, below = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    if (x > 3.5) ++above;
    if (x < -3.5) ++below;
  }
  // P(X>3.5) = 2.3263e-4, expected ~465 of 2e6 per side
  const double p = 2.3262907903552502e-4;
  const double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::fabs(static_cast<double>(above) / n - p) < 5.0 * se);
  CHECK(std::fabs(static_cast<double>(below) / n - p) < 5.0 * se);
}

TEST_CASE("fill_normal is deterministic per seed") {
  Tensor a = Tensor::zeros({3, 5});
  Tensor b = Tensor::zeros({3, 5});
  Rng r1(77), r2(77);
  r1.fill_normal(a);
  r2.fill_normal(b);
  CHECK(a.data == b.data);
}

}  // TEST_SUITE

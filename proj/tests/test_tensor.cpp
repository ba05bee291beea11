#include <doctest.h>

#include "noncross/rng.hpp"
#include "noncross/tensor.hpp"

using namespace ncx;

TEST_SUITE("tensor") {

TEST_CASE("matmul identity") {
  Tensor eye({2, 2}, {1, 0, 0, 1});
  Tensor b({2, 2}, {3, 4, 5, 6});
  Tensor c = matmul(eye, b);
  CHECK(c.data == b.data);
}

TEST_CASE("matmul 1x2 by 2x1") {
  Tensor a({1, 2}, {1, 2});
  Tensor b({2, 1}, {3, 4});
  Tensor c = matmul(a, b);
  CHECK(c.shape == std::vector<int>{1, 1});
  CHECK(c.data[0] == doctest::Approx(11.0).epsilon(1e-15));
}

TEST_CASE("matmul matches brute-force triple loop") {
  Rng rng(11);
  Tensor a = Tensor::zeros({3, 4});
  Tensor b = Tensor::zeros({4, 2});
  rng.fill_normal(a);
  rng.fill_normal(b);
  Tensor c = matmul(a, b);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += a.at(i, k) * b.at(k, j);
      CHECK(c.at(i, j) == doctest::Approx(acc).epsilon(1e-13));
    }
  }
}

TEST_CASE("matmul shape mismatch") {
  Tensor a({2, 3}, {1, 2, 3, 4, 5, 6});
  Tensor b({2, 2}, {1, 2, 3, 4});
  CHECK_THROWS_AS(matmul(a, b), DimensionError);
}

TEST_CASE("transposed products agree with explicit transpose") {
  Rng rng(12);
  Tensor a = Tensor::zeros({5, 3});
  Tensor b = Tensor::zeros({5, 4});
  rng.fill_normal(a);
  rng.fill_normal(b);
  Tensor tn = matmul_tn(a, b);
  Tensor ref = matmul(transpose(a), b);
  for (size_t i = 0; i < ref.data.size(); ++i) CHECK(tn.data[i] == doctest::Approx(ref.data[i]).epsilon(1e-13));

  Tensor x = Tensor::zeros({2, 3});
  Tensor y = Tensor::zeros({4, 3});
  rng.fill_normal(x);
  rng.fill_normal(y);
  Tensor z = matmul_nt(x, y);
  Tensor zref = matmul(x, transpose(y));
  for (size_t i = 0; i < zref.data.size(); ++i) CHECK(z.data[i] == doctest::Approx(zref.data[i]).epsilon(1e-13));
}

TEST_CASE("ops do not mutate inputs") {
  Tensor a({2, 2}, {1, 2, 3, 4});
  Tensor b({2, 2}, {5, 6, 7, 8});
  const std::vector<double> a0 = a.data, b0 = b.data;
  (void)add(a, b);
  (void)sub(a, b);
  (void)matmul(a, b);
  (void)silu(a);
  (void)scale(a, 2.0);
  CHECK(a.data == a0);
  CHECK(b.data == b0);
}

TEST_CASE("add_row and column_sums") {
  Tensor m({2, 3}, {1, 2, 3, 4, 5, 6});
  Tensor r({3}, {10, 20, 30});
  Tensor s = add_row(m, r);
  CHECK(s.data == std::vector<double>{11, 22, 33, 14, 25, 36});
  Tensor cs = column_sums(m);
  CHECK(cs.data == std::vector<double>{5, 7, 9});
  CHECK_THROWS_AS(add_row(m, Tensor({2}, {1, 2})), DimensionError);
}

TEST_CASE("hstack") {
  Tensor a({2, 1}, {1, 2});
  Tensor b({2, 2}, {3, 4, 5, 6});
  Tensor c = hstack({&a, &b});
  CHECK(c.shape == std::vector<int>{2, 3});
  CHECK(c.data == std::vector<double>{1, 3, 4, 2, 5, 6});
}

TEST_CASE("finite checks") {
  Tensor a({2}, {1.0, 2.0});
  CHECK(a.all_finite());
  a.data[1] = std::nan("");
  CHECK_FALSE(a.all_finite());
  CHECK_THROWS_AS(check_finite(a, "probe"), NumericError);
}

TEST_CASE("distances") {
  Tensor a({2}, {0, 0});
  Tensor b({2}, {3, 4});
  CHECK(squared_distance(a, b) == doctest::Approx(25.0));
  CHECK(euclidean_distance(a, b) == doctest::Approx(5.0));
}

}  // TEST_SUITE

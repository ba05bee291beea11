#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "noncross/errors.hpp"

namespace ncx {

// Dense row-major array of doubles. Kernels below never mutate their inputs;
// anything that trains or samples goes through these so results stay bit-reproducible.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<int> shape_, std::vector<double> data_);

  static Tensor zeros(std::vector<int> shape);
  static Tensor full(std::vector<int> shape, double value);
  static Tensor row_vector(std::vector<double> values);

  std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
  int rows() const;
  int cols() const;
  bool is_matrix() const { return shape.size() == 2; }

  double& at(int i, int j);
  double at(int i, int j) const;

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
  bool all_finite() const;
};

std::int64_t shape_numel(const std::vector<int>& shape);
std::string shape_str(const std::vector<int>& shape);

// C = A[m x k] * B[k x n]
Tensor matmul(const Tensor& a, const Tensor& b);
// C = A[m x k] * B[n x k]^T
Tensor matmul_nt(const Tensor& a, const Tensor& b);
// C = A[m x k]^T * B[m x n]
Tensor matmul_tn(const Tensor& a, const Tensor& b);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
// m[i,:] + row for every i
Tensor add_row(const Tensor& m, const Tensor& row);
Tensor column_sums(const Tensor& m);
Tensor silu(const Tensor& a);
Tensor silu_backward(const Tensor& input, const Tensor& upstream);
double sum_sq(const Tensor& a);
double dot(const Tensor& a, const Tensor& b);
double squared_distance(const Tensor& a, const Tensor& b);
double euclidean_distance(const Tensor& a, const Tensor& b);

Tensor transpose(const Tensor& m);
Tensor extract_row(const Tensor& m, int i);
void set_row(Tensor& m, int i, const Tensor& row);
Tensor hstack(const std::vector<const Tensor*>& parts);

void check_finite(const Tensor& t, const char* what);

}  // namespace ncx

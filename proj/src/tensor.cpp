#include "noncross/tensor.hpp"

#include <cstring>
#include <sstream>

namespace ncx {

std::int64_t shape_numel(const std::vector<int>& shape) {
  std::int64_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw DimensionError("non-positive dimension in shape " + shape_str(shape));
    n *= d;
  }
  return n;
}

std::string shape_str(const std::vector<int>& shape) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  os << "]";
  return os.str();
}

Tensor::Tensor(std::vector<int> shape_, std::vector<double> data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
  if (shape_numel(shape) != static_cast<std::int64_t>(data.size()))
    throw DimensionError("shape " + shape_str(shape) + " does not match data length");
}

Tensor Tensor::zeros(std::vector<int> shape) {
  std::int64_t n = shape_numel(shape);
  return Tensor(std::move(shape), std::vector<double>(static_cast<size_t>(n), 0.0));
}

Tensor Tensor::full(std::vector<int> shape, double value) {
  std::int64_t n = shape_numel(shape);
  return Tensor(std::move(shape), std::vector<double>(static_cast<size_t>(n), value));
}

Tensor Tensor::row_vector(std::vector<double> values) {
  int n = static_cast<int>(values.size());
  return Tensor({n}, std::move(values));
}

int Tensor::rows() const {
  if (!is_matrix()) throw DimensionError("rows() on non-matrix of shape " + shape_str(shape));
  return shape[0];
}

int Tensor::cols() const {
  if (!is_matrix()) throw DimensionError("cols() on non-matrix of shape " + shape_str(shape));
  return shape[1];
}

double& Tensor::at(int i, int j) {
  return data[static_cast<size_t>(i) * cols() + j];
}

double Tensor::at(int i, int j) const {
  return data[static_cast<size_t>(i) * cols() + j];
}

bool Tensor::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

void check_finite(const Tensor& t, const char* what) {
  if (!t.all_finite()) throw NumericError(std::string(what) + ": non-finite values");
}

static void require_matrix(const Tensor& t, const char* what) {
  if (!t.is_matrix()) throw DimensionError(std::string(what) + ": expected matrix, got " + shape_str(t.shape));
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul lhs");
  require_matrix(b, "matmul rhs");
  if (a.cols() != b.rows())
    throw DimensionError("matmul: inner dimensions disagree, " + shape_str(a.shape) + " vs " + shape_str(b.shape));
  const int m = a.rows(), k = a.cols(), n = b.cols();
  Tensor c = Tensor::zeros({m, n});
  for (int i = 0; i < m; ++i) {
    const double* arow = &a.data[static_cast<size_t>(i) * k];
    double* crow = &c.data[static_cast<size_t>(i) * n];
    for (int kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      const double* brow = &b.data[static_cast<size_t>(kk) * n];
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul_nt lhs");
  require_matrix(b, "matmul_nt rhs");
  if (a.cols() != b.cols())
    throw DimensionError("matmul_nt: inner dimensions disagree, " + shape_str(a.shape) + " vs " + shape_str(b.shape));
  const int m = a.rows(), k = a.cols(), n = b.rows();
  Tensor c = Tensor::zeros({m, n});
  for (int i = 0; i < m; ++i) {
    const double* arow = &a.data[static_cast<size_t>(i) * k];
    double* crow = &c.data[static_cast<size_t>(i) * n];
    for (int j = 0; j < n; ++j) {
      const double* brow = &b.data[static_cast<size_t>(j) * k];
      double acc = 0.0;
      for (int kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
      crow[j] = acc;
    }
  }
  return c;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul_tn lhs");
  require_matrix(b, "matmul_tn rhs");
  if (a.rows() != b.rows())
    throw DimensionError("matmul_tn: inner dimensions disagree, " + shape_str(a.shape) + " vs " + shape_str(b.shape));
  const int m = a.rows(), k = a.cols(), n = b.cols();
  Tensor c = Tensor::zeros({k, n});
  for (int i = 0; i < m; ++i) {
    const double* arow = &a.data[static_cast<size_t>(i) * k];
    const double* brow = &b.data[static_cast<size_t>(i) * n];
    for (int kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      double* crow = &c.data[static_cast<size_t>(kk) * n];
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

static void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (!a.same_shape(b))
    throw DimensionError(std::string(what) + ": shapes differ, " + shape_str(a.shape) + " vs " + shape_str(b.shape));
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Tensor c = a;
  for (size_t i = 0; i < c.data.size(); ++i) c.data[i] += b.data[i];
  return c;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  Tensor c = a;
  for (size_t i = 0; i < c.data.size(); ++i) c.data[i] -= b.data[i];
  return c;
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  Tensor c = a;
  for (size_t i = 0; i < c.data.size(); ++i) c.data[i] *= b.data[i];
  return c;
}

Tensor scale(const Tensor& a, double s) {
  Tensor c = a;
  for (double& v : c.data) v *= s;
  return c;
}

Tensor add_row(const Tensor& m, const Tensor& row) {
  require_matrix(m, "add_row");
  if (row.shape.size() != 1 || row.shape[0] != m.cols())
    throw DimensionError("add_row: row shape " + shape_str(row.shape) + " vs matrix " + shape_str(m.shape));
  Tensor c = m;
  const int n = m.cols();
  for (int i = 0; i < m.rows(); ++i) {
    double* crow = &c.data[static_cast<size_t>(i) * n];
    for (int j = 0; j < n; ++j) crow[j] += row.data[j];
  }
  return c;
}

Tensor column_sums(const Tensor& m) {
  require_matrix(m, "column_sums");
  const int n = m.cols();
  Tensor out = Tensor::zeros({n});
  for (int i = 0; i < m.rows(); ++i) {
    const double* row = &m.data[static_cast<size_t>(i) * n];
    for (int j = 0; j < n; ++j) out.data[j] += row[j];
  }
  return out;
}

static inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor silu(const Tensor& a) {
  Tensor c = a;
  for (double& v : c.data) v = v * sigmoid(v);
  return c;
}

Tensor silu_backward(const Tensor& input, const Tensor& upstream) {
  require_same_shape(input, upstream, "silu_backward");
  Tensor g = upstream;
  for (size_t i = 0; i < g.data.size(); ++i) {
    const double x = input.data[i];
    const double s = sigmoid(x);
    g.data[i] *= s * (1.0 + x * (1.0 - s));
  }
  return g;
}

double sum_sq(const Tensor& a) {
  double acc = 0.0;
  for (double v : a.data) acc += v * v;
  return acc;
}

double dot(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "dot");
  double acc = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) acc += a.data[i] * b.data[i];
  return acc;
}

double squared_distance(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "squared_distance");
  double acc = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    acc += d * d;
  }
  return acc;
}

double euclidean_distance(const Tensor& a, const Tensor& b) {
  return std::sqrt(squared_distance(a, b));
}

Tensor transpose(const Tensor& m) {
  require_matrix(m, "transpose");
  Tensor out = Tensor::zeros({m.cols(), m.rows()});
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.at(j, i) = m.at(i, j);
  return out;
}

Tensor extract_row(const Tensor& m, int i) {
  require_matrix(m, "extract_row");
  if (i < 0 || i >= m.rows()) throw IndexError("extract_row: row out of range");
  const int n = m.cols();
  Tensor out = Tensor::zeros({n});
  std::memcpy(out.data.data(), &m.data[static_cast<size_t>(i) * n], sizeof(double) * n);
  return out;
}

void set_row(Tensor& m, int i, const Tensor& row) {
  if (!m.is_matrix() || row.shape.size() != 1 || row.shape[0] != m.cols())
    throw DimensionError("set_row: incompatible shapes");
  if (i < 0 || i >= m.rows()) throw IndexError("set_row: row out of range");
  std::memcpy(&m.data[static_cast<size_t>(i) * m.cols()], row.data.data(), sizeof(double) * m.cols());
}

Tensor hstack(const std::vector<const Tensor*>& parts) {
  if (parts.empty()) throw ContractError("hstack: no inputs");
  int rows = parts[0]->rows();
  int total = 0;
  for (const Tensor* p : parts) {
    require_matrix(*p, "hstack");
    if (p->rows() != rows) throw DimensionError("hstack: row counts differ");
    total += p->cols();
  }
  Tensor out = Tensor::zeros({rows, total});
  for (int i = 0; i < rows; ++i) {
    double* dst = &out.data[static_cast<size_t>(i) * total];
    for (const Tensor* p : parts) {
      const int n = p->cols();
      std::memcpy(dst, &p->data[static_cast<size_t>(i) * n], sizeof(double) * n);
      dst += n;
    }
  }
  return out;
}

}  // namespace ncx

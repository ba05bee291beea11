#pragma once

#include <vector>

#include "noncross/tensor.hpp"

namespace ncx {

struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape over whole tensors. A fresh tape is built every training
// step; nodes are appended in evaluation order, so ids are already topological
// and backward() is a single reverse sweep.
class Tape {
 public:
  Var input(Tensor value, bool requires_grad);
  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var add_row(Var m, Var row);
  Var silu(Var a);
  Var scale(Var a, double s);
  Var sum(Var a);
  Var sum_sq(Var a);
  // mean of squared entries: sum_sq / numel
  Var mse(Var a, Var b);

  const Tensor& value(Var v) const;
  const Tensor& grad(Var v) const;
  void backward(Var loss);
  size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op { input, matmul, add, sub, add_row, silu, scale, sum, sum_sq };

  struct Node {
    Op op;
    int a = -1;
    int b = -1;
    double scalar = 0.0;
    bool requires_grad = false;
    Tensor value;
    Tensor grad;
    bool grad_set = false;
  };

  Var push(Node node);
  Node& at(Var v);
  const Node& at(Var v) const;
  void accumulate(int id, const Tensor& g);

  std::vector<Node> nodes_;
};

}  // namespace ncx

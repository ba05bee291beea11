#include "noncross/autodiff.hpp"

namespace ncx {

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Tape::Node& Tape::at(Var v) {
  if (!v.valid() || v.id >= static_cast<int>(nodes_.size())) throw ContractError("tape: invalid node id");
  return nodes_[v.id];
}

const Tape::Node& Tape::at(Var v) const {
  if (!v.valid() || v.id >= static_cast<int>(nodes_.size())) throw ContractError("tape: invalid node id");
  return nodes_[v.id];
}

Var Tape::input(Tensor value, bool requires_grad) {
  Node n;
  n.op = Op::input;
  n.requires_grad = requires_grad;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
  Node n;
  n.op = Op::matmul;
  n.a = a.id;
  n.b = b.id;
  n.value = ncx::matmul(at(a).value, at(b).value);
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  Node n;
  n.op = Op::add;
  n.a = a.id;
  n.b = b.id;
  n.value = ncx::add(at(a).value, at(b).value);
  return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
  Node n;
  n.op = Op::sub;
  n.a = a.id;
  n.b = b.id;
  n.value = ncx::sub(at(a).value, at(b).value);
  return push(std::move(n));
}

Var Tape::add_row(Var m, Var row) {
  Node n;
  n.op = Op::add_row;
  n.a = m.id;
  n.b = row.id;
  n.value = ncx::add_row(at(m).value, at(row).value);
  return push(std::move(n));
}

Var Tape::silu(Var a) {
  Node n;
  n.op = Op::silu;
  n.a = a.id;
  n.value = ncx::silu(at(a).value);
  return push(std::move(n));
}

Var Tape::scale(Var a, double s) {
  Node n;
  n.op = Op::scale;
  n.a = a.id;
  n.scalar = s;
  n.value = ncx::scale(at(a).value, s);
  return push(std::move(n));
}

Var Tape::sum(Var a) {
  Node n;
  n.op = Op::sum;
  n.a = a.id;
  double acc = 0.0;
  for (double v : at(a).value.data) acc += v;
  n.value = Tensor({1}, {acc});
  return push(std::move(n));
}

Var Tape::sum_sq(Var a) {
  Node n;
  n.op = Op::sum_sq;
  n.a = a.id;
  n.value = Tensor({1}, {ncx::sum_sq(at(a).value)});
  return push(std::move(n));
}

Var Tape::mse(Var a, Var b) {
  Var d = sub(a, b);
  Var ss = sum_sq(d);
  return scale(ss, 1.0 / static_cast<double>(at(d).value.size()));
}

const Tensor& Tape::value(Var v) const { return at(v).value; }

const Tensor& Tape::grad(Var v) const {
  const Node& n = at(v);
  if (!n.grad_set) throw ContractError("tape: gradient not computed for this node");
  return n.grad;
}

void Tape::accumulate(int id, const Tensor& g) {
  Node& n = nodes_[id];
  if (!n.grad_set) {
    n.grad = g;
    n.grad_set = true;
  } else {
    n.grad = ncx::add(n.grad, g);
  }
}

void Tape::backward(Var loss) {
  Node& top = at(loss);
  if (top.value.size() != 1) throw ContractError("backward: loss must be scalar");
  for (Node& n : nodes_) {
    n.grad = Tensor();
    n.grad_set = false;
  }
  top.grad = Tensor::full(top.value.shape, 1.0);
  top.grad_set = true;

  for (int id = loss.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.grad_set) continue;
    const Tensor& g = n.grad;
    switch (n.op) {
      case Op::input:
        break;
      case Op::matmul:
        accumulate(n.a, matmul_nt(g, nodes_[n.b].value));
        accumulate(n.b, matmul_tn(nodes_[n.a].value, g));
        break;
      case Op::add:
        accumulate(n.a, g);
        accumulate(n.b, g);
        break;
      case Op::sub:
        accumulate(n.a, g);
        accumulate(n.b, ncx::scale(g, -1.0));
        break;
      case Op::add_row:
        accumulate(n.a, g);
        accumulate(n.b, column_sums(g));
        break;
      case Op::silu:
        accumulate(n.a, silu_backward(nodes_[n.a].value, g));
        break;
      case Op::scale:
        accumulate(n.a, ncx::scale(g, n.scalar));
        break;
      case Op::sum:
        accumulate(n.a, Tensor::full(nodes_[n.a].value.shape, g.data[0]));
        break;
      case Op::sum_sq:
        accumulate(n.a, ncx::scale(nodes_[n.a].value, 2.0 * g.data[0]));
        break;
    }
  }
}

}  // namespace ncx

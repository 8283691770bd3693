#pragma once

#include "shiftlab/errors.hpp"
#include "shiftlab/types.hpp"

#include <functional>
#include <vector>

namespace shiftlab {

// Handle into a Tape; invalid until assigned by a tape operation.
struct Var {
  Index id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape over dense matrices. Operations append nodes in forward
// order, which is already a topological order, so backward() is a single
// reverse sweep that visits each node exactly once. Leaves that do not reach
// the output keep an exact zero gradient. One tape serves one forward/backward
// pass and is confined to a single thread.
class Tape {
 public:
  Var constant(Matrix value);
  // Leaf with a gradient slot (network weights, theta columns).
  Var parameter(Matrix value);

  const Matrix& value(Var v) const;
  Scalar value_scalar(Var v) const;
  // Zero until backward() has run; exact zeros for unreached leaves.
  const Matrix& grad(Var v) const;

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  // Broadcast a 1 x c bias over every row of an n x c matrix.
  Var add_row(Var a, Var bias);
  Var scale(Var a, Scalar c);
  // Elementwise product with a constant weight matrix.
  Var cmul(Var a, const Matrix& w);
  Var tanh(Var a);
  Var relu(Var a);
  Var transpose(Var a);
  // Stack n copies of a 1 x d row; gradient is the column sum.
  Var replicate_row(Var row, Index n);
  Var hcat(Var a, Var b);
  Var sum(Var a);

  // Mixture-of-RBF Gram matrix between the rows of a and b:
  //   G(i,j) = sum_q exp(-|a_i - b_j|^2 / (2 sigma_q^2)).
  // Differentiable in both arguments.
  Var rbf_gram(Var a, Var b, const std::vector<Scalar>& sigmas);

  // Accumulate d(output)/d(node) for every node; output must be 1 x 1.
  void backward(Var output);

  Index size() const { return static_cast<Index>(nodes_.size()); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool needs_grad = false;
    // Pushes this node's gradient into its inputs.
    std::function<void(Tape&, const Matrix&)> pull;
  };

  Var emit(Matrix value, bool needs_grad, std::function<void(Tape&, const Matrix&)> pull);
  Node& node(Var v);
  const Node& node(Var v) const;
  void accumulate(Var v, const Matrix& g);

  std::vector<Node> nodes_;
};

}  // namespace shiftlab

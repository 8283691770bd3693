#include "shiftlab/tape.hpp"

#include "shiftlab/parallel.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace shiftlab {

namespace {

std::string shape_of(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

}  // namespace

Tape::Node& Tape::node(Var v) {
  if (!v.valid() || v.id >= size()) throw ContractError("tape: invalid Var handle");
  return nodes_[static_cast<std::size_t>(v.id)];
}

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || v.id >= size()) throw ContractError("tape: invalid Var handle");
  return nodes_[static_cast<std::size_t>(v.id)];
}

Var Tape::emit(Matrix value, bool needs_grad, std::function<void(Tape&, const Matrix&)> pull) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  if (needs_grad) n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
  n.pull = std::move(pull);
  nodes_.push_back(std::move(n));
  return Var{size() - 1};
}

Var Tape::constant(Matrix value) { return emit(std::move(value), false, nullptr); }

Var Tape::parameter(Matrix value) { return emit(std::move(value), true, nullptr); }

const Matrix& Tape::value(Var v) const { return node(v).value; }

Scalar Tape::value_scalar(Var v) const {
  const Matrix& m = node(v).value;
  if (m.rows() != 1 || m.cols() != 1)
    throw ContractError("tape: scalar read of a " + shape_of(m) + " node");
  return m(0, 0);
}

const Matrix& Tape::grad(Var v) const {
  const Node& n = node(v);
  if (!n.needs_grad) throw ContractError("tape: gradient requested for a constant node");
  return n.grad;
}

void Tape::accumulate(Var v, const Matrix& g) {
  Node& n = node(v);
  if (n.needs_grad) n.grad += g;
}

Var Tape::matmul(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.cols() != bv.rows())
    throw ShapeError("matmul: " + shape_of(av) + " by " + shape_of(bv));
  const bool needs = node(a).needs_grad || node(b).needs_grad;
  return emit(av * bv, needs, [a, b](Tape& t, const Matrix& up) {
    if (t.node(a).needs_grad) t.accumulate(a, up * t.value(b).transpose());
    if (t.node(b).needs_grad) t.accumulate(b, t.value(a).transpose() * up);
  });
}

Var Tape::add(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.rows() != bv.rows() || av.cols() != bv.cols())
    throw ShapeError("add: " + shape_of(av) + " vs " + shape_of(bv));
  const bool needs = node(a).needs_grad || node(b).needs_grad;
  return emit(av + bv, needs, [a, b](Tape& t, const Matrix& up) {
    t.accumulate(a, up);
    t.accumulate(b, up);
  });
}

Var Tape::sub(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.rows() != bv.rows() || av.cols() != bv.cols())
    throw ShapeError("sub: " + shape_of(av) + " vs " + shape_of(bv));
  const bool needs = node(a).needs_grad || node(b).needs_grad;
  return emit(av - bv, needs, [a, b](Tape& t, const Matrix& up) {
    t.accumulate(a, up);
    t.accumulate(b, -up);
  });
}

Var Tape::add_row(Var a, Var bias) {
  const Matrix& av = value(a);
  const Matrix& bv = value(bias);
  if (bv.rows() != 1 || bv.cols() != av.cols())
    throw ShapeError("add_row: bias " + shape_of(bv) + " for " + shape_of(av));
  const bool needs = node(a).needs_grad || node(bias).needs_grad;
  Matrix out = av;
  out.rowwise() += bv.row(0);
  return emit(std::move(out), needs, [a, bias](Tape& t, const Matrix& up) {
    t.accumulate(a, up);
    if (t.node(bias).needs_grad) t.accumulate(bias, up.colwise().sum());
  });
}

Var Tape::scale(Var a, Scalar c) {
  return emit(value(a) * c, node(a).needs_grad, [a, c](Tape& t, const Matrix& up) {
    t.accumulate(a, up * c);
  });
}

Var Tape::cmul(Var a, const Matrix& w) {
  const Matrix& av = value(a);
  if (av.rows() != w.rows() || av.cols() != w.cols())
    throw ShapeError("cmul: " + shape_of(av) + " vs weight " + shape_of(w));
  return emit(av.cwiseProduct(w), node(a).needs_grad, [a, w](Tape& t, const Matrix& up) {
    t.accumulate(a, up.cwiseProduct(w));
  });
}

Var Tape::tanh(Var a) {
  Matrix out = value(a).array().tanh().matrix();
  Var self = emit(out, node(a).needs_grad, nullptr);
  node(self).pull = [a, self](Tape& t, const Matrix& up) {
    const Matrix& y = t.value(self);
    t.accumulate(a, (up.array() * (1.0 - y.array().square())).matrix());
  };
  return self;
}

Var Tape::relu(Var a) {
  const Matrix& av = value(a);
  Matrix out = av.cwiseMax(0.0);
  return emit(std::move(out), node(a).needs_grad, [a](Tape& t, const Matrix& up) {
    const Matrix mask = (t.value(a).array() > 0.0).cast<Scalar>().matrix();
    t.accumulate(a, up.cwiseProduct(mask));
  });
}

Var Tape::transpose(Var a) {
  return emit(value(a).transpose(), node(a).needs_grad, [a](Tape& t, const Matrix& up) {
    t.accumulate(a, up.transpose());
  });
}

Var Tape::replicate_row(Var row, Index n) {
  const Matrix& rv = value(row);
  if (rv.rows() != 1) throw ShapeError("replicate_row: expected 1 x d, got " + shape_of(rv));
  if (n < 1) throw ContractError("replicate_row: n must be >= 1");
  Matrix out = rv.replicate(n, 1);
  return emit(std::move(out), node(row).needs_grad, [row](Tape& t, const Matrix& up) {
    t.accumulate(row, up.colwise().sum());
  });
}

Var Tape::hcat(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.rows() != bv.rows())
    throw ShapeError("hcat: row mismatch " + shape_of(av) + " vs " + shape_of(bv));
  Matrix out(av.rows(), av.cols() + bv.cols());
  out << av, bv;
  const Index ac = av.cols();
  const bool needs = node(a).needs_grad || node(b).needs_grad;
  return emit(std::move(out), needs, [a, b, ac](Tape& t, const Matrix& up) {
    t.accumulate(a, up.leftCols(ac));
    t.accumulate(b, up.rightCols(up.cols() - ac));
  });
}

Var Tape::sum(Var a) {
  Matrix out(1, 1);
  out(0, 0) = value(a).sum();
  return emit(std::move(out), node(a).needs_grad, [a](Tape& t, const Matrix& up) {
    t.accumulate(a, Matrix::Constant(t.value(a).rows(), t.value(a).cols(), up(0, 0)));
  });
}

Var Tape::rbf_gram(Var a, Var b, const std::vector<Scalar>& sigmas) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.cols() != bv.cols())
    throw ShapeError("rbf_gram: feature dims " + shape_of(av) + " vs " + shape_of(bv));
  if (sigmas.empty()) throw ContractError("rbf_gram: empty bandwidth list");

  const Index n = av.rows();
  const Index m = bv.rows();
  const Vector an = av.rowwise().squaredNorm();
  const Vector bn = bv.rowwise().squaredNorm();
  Matrix d2 = (-2.0 * av * bv.transpose());
  d2.colwise() += an;
  d2.rowwise() += bn.transpose();
  d2 = d2.cwiseMax(0.0);

  Matrix gram = Matrix::Zero(n, m);
  parallel_rows(n, [&](Index lo, Index hi) {
    for (Index i = lo; i < hi; ++i)
      for (Index j = 0; j < m; ++j) {
        Scalar acc = 0.0;
        for (const Scalar s : sigmas) acc += std::exp(-d2(i, j) / (2.0 * s * s));
        gram(i, j) = acc;
      }
  });

  const bool needs = node(a).needs_grad || node(b).needs_grad;
  if (!needs) return emit(std::move(gram), false, nullptr);

  // Backward needs sum_q k_q / sigma_q^2 elementwise; recomputed from the
  // cached squared distances.
  Matrix d2_cached = d2;
  std::vector<Scalar> sig = sigmas;
  return emit(std::move(gram), true,
              [a, b, d2_cached, sig](Tape& t, const Matrix& up) {
                const Matrix& av2 = t.value(a);
                const Matrix& bv2 = t.value(b);
                Matrix w = Matrix::Zero(d2_cached.rows(), d2_cached.cols());
                for (const Scalar s : sig) {
                  const Scalar inv = 1.0 / (s * s);
                  w += (-0.5 * inv * d2_cached.array()).exp().matrix() * inv;
                }
                w = w.cwiseProduct(up);
                if (t.node(a).needs_grad) {
                  const Vector rs = w.rowwise().sum();
                  t.accumulate(a, w * bv2 - rs.asDiagonal() * av2);
                }
                if (t.node(b).needs_grad) {
                  const Vector cs = w.colwise().sum().transpose();
                  t.accumulate(b, w.transpose() * av2 - cs.asDiagonal() * bv2);
                }
              });
}

void Tape::backward(Var output) {
  Node& out = node(output);
  if (out.value.rows() != 1 || out.value.cols() != 1)
    throw ContractError("backward: output node is " + shape_of(out.value) + ", expected 1x1");
  if (!out.needs_grad)
    throw ContractError("backward: output does not depend on any parameter");

  for (Node& n : nodes_)
    if (n.needs_grad) n.grad.setZero();
  out.grad(0, 0) = 1.0;

  for (Index i = output.id; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.needs_grad || !n.pull) continue;
    if (n.grad.isZero(0.0)) continue;
    n.pull(*this, n.grad);
  }
}

}  // namespace shiftlab

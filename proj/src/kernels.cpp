#include "shiftlab/kernels.hpp"

#include "shiftlab/errors.hpp"
#include "shiftlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace shiftlab {

namespace {

// Median-heuristic inputs larger than this are strided down; the exact
// pairwise set gets quadratic in memory.
constexpr Index kMedianSampleCap = 2048;

void check_sigmas(const KernelConfig& cfg) {
  if (cfg.sigmas.empty()) throw ContractError("kernel config: empty bandwidth list");
  for (const Scalar s : cfg.sigmas)
    if (!(s > 0.0)) throw ContractError("kernel config: bandwidths must be positive");
}

Matrix pairwise_sqdist(const MatrixRef& a, const MatrixRef& b) {
  const Vector an = a.rowwise().squaredNorm();
  const Vector bn = b.rowwise().squaredNorm();
  Matrix d2 = -2.0 * (a * b.transpose());
  d2.colwise() += an;
  d2.rowwise() += bn.transpose();
  return d2.cwiseMax(0.0);
}

Scalar weighted_mean(const Matrix& gram) { return gram.mean(); }

}  // namespace

const std::vector<Scalar>& median_multipliers() {
  static const std::vector<Scalar> m{0.25, 0.5, 1.0, 2.0, 4.0};
  return m;
}

const std::vector<Scalar>& fixed_bandwidths() {
  static const std::vector<Scalar> m{1.0, 2.0, 4.0, 8.0, 16.0};
  return m;
}

Scalar rbf_mixture(const VectorRef& x, const VectorRef& y, const KernelConfig& cfg) {
  if (x.size() != y.size()) {
    std::ostringstream os;
    os << "rbf_mixture: dimension mismatch " << x.size() << " vs " << y.size();
    throw ShapeError(os.str());
  }
  check_sigmas(cfg);
  const Scalar d2 = (x - y).squaredNorm();
  Scalar acc = 0.0;
  for (const Scalar s : cfg.sigmas) acc += std::exp(-d2 / (2.0 * s * s));
  return acc;
}

KernelConfig median_heuristic(const MatrixRef& data, const std::vector<Scalar>& multipliers) {
  if (data.rows() < 2) throw ContractError("median_heuristic: need at least 2 rows");
  if (multipliers.empty()) throw ContractError("median_heuristic: empty multiplier list");

  Matrix sample;
  if (data.rows() > kMedianSampleCap) {
    const Index stride = (data.rows() + kMedianSampleCap - 1) / kMedianSampleCap;
    const Index keep = (data.rows() + stride - 1) / stride;
    sample.resize(keep, data.cols());
    for (Index i = 0, r = 0; i < data.rows(); i += stride, ++r) sample.row(r) = data.row(i);
  } else {
    sample = data;
  }

  const Index n = sample.rows();
  std::vector<Scalar> dists;
  dists.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      dists.push_back((sample.row(i) - sample.row(j)).norm());

  const std::size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
  Scalar median = dists[mid];
  if (dists.size() % 2 == 0) {
    const Scalar lower = *std::max_element(dists.begin(), dists.begin() + mid);
    median = 0.5 * (median + lower);
  }
  if (!(median > 0.0))
    throw DegenerateBandwidthError("median_heuristic: zero median pairwise distance");

  KernelConfig cfg;
  cfg.mode = KernelConfig::Mode::MedianScaled;
  cfg.sigmas.reserve(multipliers.size());
  for (const Scalar m : multipliers) cfg.sigmas.push_back(m * median);
  return cfg;
}

Scalar median_pairwise_1d(const VectorRef& values) {
  Matrix col(values.size(), 1);
  col.col(0) = values;
  const KernelConfig cfg = median_heuristic(col, {1.0});
  return cfg.sigmas[0];
}

Matrix rbf_gram(const MatrixRef& a, const MatrixRef& b, const KernelConfig& cfg) {
  if (a.cols() != b.cols()) {
    std::ostringstream os;
    os << "rbf_gram: feature dims " << a.cols() << " vs " << b.cols();
    throw ShapeError(os.str());
  }
  check_sigmas(cfg);
  const Matrix d2 = pairwise_sqdist(a, b);
  Matrix gram = Matrix::Zero(d2.rows(), d2.cols());
  parallel_rows(d2.rows(), [&](Index lo, Index hi) {
    for (Index i = lo; i < hi; ++i)
      for (Index j = 0; j < d2.cols(); ++j) {
        Scalar acc = 0.0;
        for (const Scalar s : cfg.sigmas) acc += std::exp(-d2(i, j) / (2.0 * s * s));
        gram(i, j) = acc;
      }
  });
  return gram;
}

Matrix label_gram(const VectorRef& ya, const VectorRef& yb, const LabelKernel& lk) {
  Matrix g(ya.size(), yb.size());
  if (lk.kind == LabelKernel::Kind::Delta) {
    if (!lk.label_set.empty()) {
      auto known = [&](Scalar v) {
        for (const Scalar c : lk.label_set)
          if (c == v) return true;
        return false;
      };
      for (Index i = 0; i < ya.size(); ++i)
        if (!known(ya(i))) throw ContractError("label_gram: unknown label value");
      for (Index j = 0; j < yb.size(); ++j)
        if (!known(yb(j))) throw ContractError("label_gram: unknown label value");
    }
    for (Index i = 0; i < ya.size(); ++i)
      for (Index j = 0; j < yb.size(); ++j) g(i, j) = (ya(i) == yb(j)) ? 1.0 : 0.0;
  } else {
    if (!(lk.sigma > 0.0)) throw ContractError("label_gram: RBF label kernel needs sigma > 0");
    const Scalar inv = 1.0 / (2.0 * lk.sigma * lk.sigma);
    for (Index i = 0; i < ya.size(); ++i)
      for (Index j = 0; j < yb.size(); ++j) {
        const Scalar d = ya(i) - yb(j);
        g(i, j) = std::exp(-d * d * inv);
      }
  }
  return g;
}

Scalar mmd2_marginal(const MatrixRef& p, const MatrixRef& q, const KernelConfig& cfg) {
  if (p.rows() == 0 || q.rows() == 0) throw ContractError("mmd2_marginal: empty sample");
  const Scalar pp = weighted_mean(rbf_gram(p, p, cfg));
  const Scalar pq = weighted_mean(rbf_gram(p, q, cfg));
  const Scalar qq = weighted_mean(rbf_gram(q, q, cfg));
  return pp - 2.0 * pq + qq;
}

Scalar mmd2_joint(const MatrixRef& px, const VectorRef& py, const MatrixRef& qx,
                  const VectorRef& qy, const KernelConfig& cfg, const LabelKernel& lk) {
  if (px.rows() == 0 || qx.rows() == 0) throw ContractError("mmd2_joint: empty sample");
  if (px.rows() != py.size() || qx.rows() != qy.size())
    throw ShapeError("mmd2_joint: feature/label row mismatch");
  const Scalar pp = weighted_mean(rbf_gram(px, px, cfg).cwiseProduct(label_gram(py, py, lk)));
  const Scalar pq = weighted_mean(rbf_gram(px, qx, cfg).cwiseProduct(label_gram(py, qy, lk)));
  const Scalar qq = weighted_mean(rbf_gram(qx, qx, cfg).cwiseProduct(label_gram(qy, qy, lk)));
  return pp - 2.0 * pq + qq;
}

Scalar mmd2_paired(const MatrixRef& px, const MatrixRef& pc, const MatrixRef& qx,
                   const MatrixRef& qc, const KernelConfig& cfg_x, const KernelConfig& cfg_c) {
  if (px.rows() == 0 || qx.rows() == 0) throw ContractError("mmd2_paired: empty sample");
  if (px.rows() != pc.rows() || qx.rows() != qc.rows())
    throw ShapeError("mmd2_paired: feature/conditioner row mismatch");
  const Scalar pp =
      weighted_mean(rbf_gram(px, px, cfg_x).cwiseProduct(rbf_gram(pc, pc, cfg_c)));
  const Scalar pq =
      weighted_mean(rbf_gram(px, qx, cfg_x).cwiseProduct(rbf_gram(pc, qc, cfg_c)));
  const Scalar qq =
      weighted_mean(rbf_gram(qx, qx, cfg_x).cwiseProduct(rbf_gram(qc, qc, cfg_c)));
  return pp - 2.0 * pq + qq;
}

Var mmd2_marginal_op(Tape& tape, Var p, Var q, const KernelConfig& cfg) {
  check_sigmas(cfg);
  const Index n = tape.value(p).rows();
  const Index m = tape.value(q).rows();
  if (n == 0 || m == 0) throw ContractError("mmd2_marginal_op: empty sample");
  const Var pp = tape.sum(tape.rbf_gram(p, p, cfg.sigmas));
  const Var pq = tape.sum(tape.rbf_gram(p, q, cfg.sigmas));
  const Var qq = tape.sum(tape.rbf_gram(q, q, cfg.sigmas));
  const Var t1 = tape.scale(pp, 1.0 / static_cast<Scalar>(n * n));
  const Var t2 = tape.scale(pq, -2.0 / static_cast<Scalar>(n * m));
  const Var t3 = tape.scale(qq, 1.0 / static_cast<Scalar>(m * m));
  return tape.add(tape.add(t1, t2), t3);
}

Var mmd2_joint_op(Tape& tape, Var px, Var qx, const KernelConfig& cfg, const Matrix& lpp,
                  const Matrix& lpq, const Matrix& lqq) {
  check_sigmas(cfg);
  const Index n = tape.value(px).rows();
  const Index m = tape.value(qx).rows();
  if (n == 0 || m == 0) throw ContractError("mmd2_joint_op: empty sample");
  if (lpp.rows() != n || lpq.rows() != n || lpq.cols() != m || lqq.rows() != m)
    throw ShapeError("mmd2_joint_op: label gram shapes do not match samples");
  const Var pp = tape.sum(tape.cmul(tape.rbf_gram(px, px, cfg.sigmas), lpp));
  const Var pq = tape.sum(tape.cmul(tape.rbf_gram(px, qx, cfg.sigmas), lpq));
  const Var qq = tape.sum(tape.cmul(tape.rbf_gram(qx, qx, cfg.sigmas), lqq));
  const Var t1 = tape.scale(pp, 1.0 / static_cast<Scalar>(n * n));
  const Var t2 = tape.scale(pq, -2.0 / static_cast<Scalar>(n * m));
  const Var t3 = tape.scale(qq, 1.0 / static_cast<Scalar>(m * m));
  return tape.add(tape.add(t1, t2), t3);
}

}  // namespace shiftlab

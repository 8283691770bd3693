#pragma once

#include "shiftlab/tape.hpp"
#include "shiftlab/types.hpp"

#include <vector>

namespace shiftlab {

// Mixture-of-RBF kernel k(x,x') = sum_q exp(-|x-x'|^2 / (2 sigma_q^2)).
struct KernelConfig {
  enum class Mode { FixedList, MedianScaled };
  std::vector<Scalar> sigmas;
  Mode mode = Mode::MedianScaled;
};

// Kernel on the label marginal: exact match for categorical labels, RBF with
// its own bandwidth for continuous ones.
struct LabelKernel {
  enum class Kind { Delta, Rbf };
  Kind kind = Kind::Delta;
  Scalar sigma = 1.0;                 // Rbf only
  std::vector<Scalar> label_set;      // Delta only; empty = accept any value
};

// Default bandwidth multipliers applied to the median pairwise distance.
const std::vector<Scalar>& median_multipliers();
// Fixed bandwidth list usable instead of the median-scaled mode.
const std::vector<Scalar>& fixed_bandwidths();

Scalar rbf_mixture(const VectorRef& x, const VectorRef& y, const KernelConfig& cfg);

// sigma_q = multiplier_q * median of pairwise Euclidean distances between
// rows. Throws DegenerateBandwidthError when the median is zero.
KernelConfig median_heuristic(const MatrixRef& data,
                              const std::vector<Scalar>& multipliers = median_multipliers());

// Median pairwise absolute difference of a single column (label bandwidth).
Scalar median_pairwise_1d(const VectorRef& values);

Matrix rbf_gram(const MatrixRef& a, const MatrixRef& b, const KernelConfig& cfg);
Matrix label_gram(const VectorRef& ya, const VectorRef& yb, const LabelKernel& lk);

// Biased V-statistic estimators; sample sizes may differ.
Scalar mmd2_marginal(const MatrixRef& p, const MatrixRef& q, const KernelConfig& cfg);
Scalar mmd2_joint(const MatrixRef& px, const VectorRef& py, const MatrixRef& qx,
                  const VectorRef& qy, const KernelConfig& cfg, const LabelKernel& lk);
// Joint MMD on (conditioning vector, feature) pairs with an RBF mixture on
// each factor; used when the conditioning side is multi-column.
Scalar mmd2_paired(const MatrixRef& px, const MatrixRef& pc, const MatrixRef& qx,
                   const MatrixRef& qc, const KernelConfig& cfg_x, const KernelConfig& cfg_c);

// Tape-side estimators; p and q are tape nodes so gradients flow to whichever
// side carries parameters.
Var mmd2_marginal_op(Tape& tape, Var p, Var q, const KernelConfig& cfg);
// Joint MMD with precomputed constant label Grams (labels are never
// differentiated through).
Var mmd2_joint_op(Tape& tape, Var px, Var qx, const KernelConfig& cfg, const Matrix& lpp,
                  const Matrix& lpq, const Matrix& lqq);

}  // namespace shiftlab

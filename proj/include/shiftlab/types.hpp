#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace shiftlab {

// Dense types. Everything numeric in the library runs through these aliases;
// Scalar is double throughout (gradient checks need f64 headroom).
template <typename S> using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S> using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S> using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;

using Scalar = double;
using Matrix = Mat<Scalar>;
using Vector = Vec<Scalar>;
using RowVector = RowVec<Scalar>;
using Index = Eigen::Index;

// Read-only views that bind matrix expressions and blocks without copies.
using MatrixRef = Eigen::Ref<const Matrix>;
using VectorRef = Eigen::Ref<const Vector>;

}  // namespace shiftlab

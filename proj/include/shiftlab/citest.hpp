#pragma once

#include "shiftlab/types.hpp"

#include <functional>
#include <vector>

namespace shiftlab {

struct CiTestResult {
  Index i = -1;
  Index j = -1;
  std::vector<Index> conditioning;
  Scalar statistic = 0.0;
  Scalar p_value = 1.0;
  bool independent = false;
};

// Answers "is i independent of j given Z"; pluggable so PC can run against a
// d-separation oracle in tests.
using CiTest = std::function<CiTestResult(Index i, Index j, const std::vector<Index>& z)>;

// Fisher z-transform of the partial correlation of columns (i,j) given the
// columns in z. T = sqrt(n - |z| - 3) * atanh(r); independent iff the two-sided
// p-value is >= alpha.
CiTestResult fisher_z_test(const MatrixRef& data, Index i, Index j, const std::vector<Index>& z,
                           Scalar alpha);

// Partial correlation via inversion of the correlation submatrix; exposed for
// direct checks.
Scalar partial_correlation(const MatrixRef& data, Index i, Index j, const std::vector<Index>& z);

CiTest fisher_z_tester(const MatrixRef& data, Scalar alpha);

}  // namespace shiftlab

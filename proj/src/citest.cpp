#include "shiftlab/citest.hpp"

#include "shiftlab/errors.hpp"

#include <cmath>
#include <sstream>

namespace shiftlab {

namespace {

Matrix correlation_submatrix(const MatrixRef& data, const std::vector<Index>& cols) {
  const Index n = data.rows();
  const Index k = static_cast<Index>(cols.size());
  Matrix centered(n, k);
  for (Index c = 0; c < k; ++c) {
    const Vector col = data.col(cols[static_cast<std::size_t>(c)]);
    centered.col(c) = col.array() - col.mean();
  }
  Matrix cov = centered.transpose() * centered / static_cast<Scalar>(n - 1);
  Vector sd = cov.diagonal().cwiseSqrt();
  for (Index a = 0; a < k; ++a)
    if (!(sd(a) > 0.0)) throw NumericError("fisher_z_test: zero-variance column");
  Matrix corr(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b) corr(a, b) = cov(a, b) / (sd(a) * sd(b));
  return corr;
}

}  // namespace

Scalar partial_correlation(const MatrixRef& data, Index i, Index j, const std::vector<Index>& z) {
  std::vector<Index> cols{i, j};
  cols.insert(cols.end(), z.begin(), z.end());
  const Matrix corr = correlation_submatrix(data, cols);

  Eigen::FullPivLU<Matrix> lu(corr);
  if (!lu.isInvertible())
    throw NumericError("fisher_z_test: singular correlation submatrix");
  const Matrix precision = lu.inverse();
  return -precision(0, 1) / std::sqrt(precision(0, 0) * precision(1, 1));
}

CiTestResult fisher_z_test(const MatrixRef& data, Index i, Index j, const std::vector<Index>& z,
                           Scalar alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ContractError("fisher_z_test: alpha must lie in (0,1)");
  if (i < 0 || i >= data.cols() || j < 0 || j >= data.cols() || i == j)
    throw ContractError("fisher_z_test: bad column pair");
  for (const Index c : z)
    if (c < 0 || c >= data.cols() || c == i || c == j)
      throw ContractError("fisher_z_test: bad conditioning column");
  const Index n = data.rows();
  const Index k = static_cast<Index>(z.size());
  if (n <= k + 3) {
    std::ostringstream os;
    os << "fisher_z_test: need n > |Z|+3, got n=" << n << ", |Z|=" << k;
    throw ContractError(os.str());
  }

  Scalar r = partial_correlation(data, i, j, z);
  const Scalar cap = 1.0 - 1e-12;
  if (r > cap) r = cap;
  if (r < -cap) r = -cap;

  CiTestResult result;
  result.i = i;
  result.j = j;
  result.conditioning = z;
  result.statistic =
      std::sqrt(static_cast<Scalar>(n - k - 3)) * 0.5 * std::log((1.0 + r) / (1.0 - r));
  // Two-sided tail under the standard normal.
  result.p_value = std::erfc(std::abs(result.statistic) / std::sqrt(2.0));
  result.independent = result.p_value >= alpha;
  return result;
}

CiTest fisher_z_tester(const MatrixRef& data, Scalar alpha) {
  const Matrix snapshot = data;
  return [snapshot, alpha](Index i, Index j, const std::vector<Index>& z) {
    return fisher_z_test(snapshot, i, j, z, alpha);
  };
}

}  // namespace shiftlab

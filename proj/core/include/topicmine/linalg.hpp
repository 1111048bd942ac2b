#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "topicmine/sparse.hpp"

namespace topicmine {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct SvdResult {
  RowMatrix u;   // m x k, orthonormal columns
  Vector s;      // k, nonincreasing
  RowMatrix v;   // n x k, orthonormal columns
};

struct SvdOptions {
  int rank = 1;
  int oversample = 10;
  int power_iters = 4;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// Rank-k truncated SVD by seeded randomized subspace iteration: Gaussian test
// matrix, `power_iters` rounds of A^T A with QR re-orthonormalisation, then an
// exact SVD of the small projected matrix. When rank + oversample reaches
// min(m, n) the range is captured completely and the result is exact up to
// rounding. Singular vectors are sign-normalised with flip_signs on u.
SvdResult truncated_svd(const CsrMatrix<double>& a, const SvdOptions& opts);
SvdResult truncated_svd(const RowMatrix& a, const SvdOptions& opts);

// Flips each column of `basis` (and the matching column of `partner`, if
// non-null) so that its largest-magnitude entry is positive. Ties go to the
// lowest row index.
void flip_signs(RowMatrix& basis, RowMatrix* partner = nullptr);

}  // namespace topicmine

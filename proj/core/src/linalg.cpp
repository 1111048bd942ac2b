#include "topicmine/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "topicmine/error.hpp"
#include "topicmine/parallel.hpp"

namespace topicmine {
namespace {

RowMatrix orthonormalize(const RowMatrix& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
  return q;
}

// apply(X) = A X, apply_t(Y) = A^T Y.
template <typename Apply, typename ApplyT>
SvdResult randomized_svd(Eigen::Index m, Eigen::Index n, Apply&& apply, ApplyT&& apply_t, const SvdOptions& opts) {
  const Eigen::Index full = std::min(m, n);
  if (opts.rank < 1 || opts.rank > full)
    throw UsageError("svd: rank " + std::to_string(opts.rank) + " must lie in [1, min(rows, cols) = " +
                     std::to_string(full) + "]");
  const Eigen::Index l = std::min<Eigen::Index>(opts.rank + std::max(opts.oversample, 0), full);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RowMatrix omega(n, l);
  for (Eigen::Index i = 0; i < omega.size(); ++i) omega.data()[i] = gauss(rng);

  RowMatrix q = orthonormalize(apply(omega));
  for (int it = 0; it < opts.power_iters; ++it) {
    RowMatrix z = orthonormalize(apply_t(q));
    q = orthonormalize(apply(z));
  }

  const Eigen::MatrixXd b = apply_t(q).transpose();  // l x n = Q^T A
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SvdResult out;
  const Eigen::Index k = opts.rank;
  out.u = q * svd.matrixU().leftCols(k);
  out.s = svd.singularValues().head(k);
  out.v = svd.matrixV().leftCols(k);
  flip_signs(out.u, &out.v);
  return out;
}

}  // namespace

void flip_signs(RowMatrix& basis, RowMatrix* partner) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
      const double a = std::abs(basis(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (basis.rows() > 0 && basis(arg, c) < 0.0) {
      basis.col(c) *= -1.0;
      if (partner) partner->col(c) *= -1.0;
    }
  }
}

SvdResult truncated_svd(const RowMatrix& a, const SvdOptions& opts) {
  return randomized_svd(
      a.rows(), a.cols(), [&](const RowMatrix& x) -> RowMatrix { return a * x; },
      [&](const RowMatrix& y) -> RowMatrix { return a.transpose() * y; }, opts);
}

SvdResult truncated_svd(const CsrMatrix<double>& a, const SvdOptions& opts) {
  const auto m = static_cast<Eigen::Index>(a.n_rows);
  const auto n = static_cast<Eigen::Index>(a.n_cols);
  auto apply = [&](const RowMatrix& x) -> RowMatrix {
    RowMatrix y = RowMatrix::Zero(m, x.cols());
    parallel_blocks(a.n_rows, opts.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        const auto cols = a.row_cols(r);
        const auto vals = a.row_values(r);
        for (std::size_t i = 0; i < cols.size(); ++i) y.row(static_cast<Eigen::Index>(r)) += vals[i] * x.row(cols[i]);
      }
    });
    return y;
  };
  // Sequential scatter keeps A^T Y independent of the thread count.
  auto apply_t = [&](const RowMatrix& y) -> RowMatrix {
    RowMatrix x = RowMatrix::Zero(n, y.cols());
    for (std::size_t r = 0; r < a.n_rows; ++r) {
      const auto cols = a.row_cols(r);
      const auto vals = a.row_values(r);
      for (std::size_t i = 0; i < cols.size(); ++i) x.row(cols[i]) += vals[i] * y.row(static_cast<Eigen::Index>(r));
    }
    return x;
  };
  return randomized_svd(m, n, apply, apply_t, opts);
}

}  // namespace topicmine

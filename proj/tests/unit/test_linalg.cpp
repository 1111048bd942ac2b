#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "topicmine/error.hpp"
#include "topicmine/linalg.hpp"

using namespace topicmine;

namespace {

RowMatrix random_matrix(std::uint64_t seed, int m, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RowMatrix a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  return a;
}

CsrMatrix<double> to_csr(const RowMatrix& a) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) rows[static_cast<std::size_t>(i)].assign(a.row(i).begin(), a.row(i).end());
  return csr_from_dense(rows, static_cast<std::size_t>(a.cols()));
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("full-rank SVD of a 6x5 matrix matches a Jacobi eigensolver") {
    const RowMatrix a = random_matrix(42, 6, 5);
    SvdOptions o;
    o.rank = 5;
    o.seed = 3;
    const auto svd = truncated_svd(a, o);

    oracle::Dense ata(5, std::vector<double>(5, 0.0));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        for (int r = 0; r < 6; ++r) ata[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += a(r, i) * a(r, j);
    const auto ev = oracle::jacobi_eigenvalues(ata);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(svd.s(i) - std::sqrt(ev[static_cast<std::size_t>(i)])) <= 1e-10);

    const RowMatrix recon = svd.u * svd.s.asDiagonal() * svd.v.transpose();
    CHECK((recon - a).norm() <= 1e-8);
    CHECK((svd.u.transpose() * svd.u - RowMatrix::Identity(5, 5)).norm() <= 1e-10);
    CHECK((svd.v.transpose() * svd.v - RowMatrix::Identity(5, 5)).norm() <= 1e-10);
    for (int i = 1; i < 5; ++i) CHECK(svd.s(i - 1) >= svd.s(i));
  }

  TEST_CASE("sign convention: largest-magnitude entry of each left vector is positive") {
    const RowMatrix a = random_matrix(7, 20, 8);
    SvdOptions o;
    o.rank = 4;
    const auto svd = truncated_svd(a, o);
    for (Eigen::Index c = 0; c < svd.u.cols(); ++c) {
      Eigen::Index arg = 0;
      svd.u.col(c).cwiseAbs().maxCoeff(&arg);
      CHECK(svd.u(arg, c) > 0.0);
    }
  }

  TEST_CASE("flip_signs breaks ties toward the lowest index and flips the partner") {
    RowMatrix basis(3, 1);
    basis << -0.5, 0.5, 0.1;
    RowMatrix partner(2, 1);
    partner << 1.0, -2.0;
    flip_signs(basis, &partner);
    CHECK(basis(0, 0) == 0.5);
    CHECK(basis(1, 0) == -0.5);
    CHECK(partner(0, 0) == -1.0);
    CHECK(partner(1, 0) == 2.0);
  }

  TEST_CASE("truncated rank captures the leading singular values of a low-rank matrix") {
    const RowMatrix left = random_matrix(1, 60, 3), right = random_matrix(2, 3, 40);
    const RowMatrix a = left * right;
    SvdOptions o;
    o.rank = 3;
    const auto svd = truncated_svd(a, o);
    CHECK((svd.u * svd.s.asDiagonal() * svd.v.transpose() - a).norm() <= 1e-8 * a.norm());
  }

  TEST_CASE("sparse and dense inputs agree; threads and seeds are reproducible") {
    RowMatrix a = random_matrix(9, 30, 12);
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (std::abs(a.data()[i]) < 0.5) a.data()[i] = 0.0;
    SvdOptions o;
    o.rank = 4;
    o.seed = 17;
    const auto dense = truncated_svd(a, o);
    const auto sparse = truncated_svd(to_csr(a), o);
    CHECK((dense.s - sparse.s).norm() <= 1e-9);
    CHECK((dense.u - sparse.u).norm() <= 1e-9);
    const auto again = truncated_svd(to_csr(a), o);
    CHECK(again.u == sparse.u);
    o.threads = 3;
    const auto threaded = truncated_svd(to_csr(a), o);
    CHECK((threaded.u - sparse.u).norm() <= 1e-9);
  }

  TEST_CASE("rank outside [1, min(m, n)] is rejected") {
    const RowMatrix a = random_matrix(1, 4, 3);
    SvdOptions o;
    o.rank = 0;
    CHECK_THROWS_AS(truncated_svd(a, o), UsageError);
    o.rank = 4;
    CHECK_THROWS_AS(truncated_svd(a, o), UsageError);
  }
}

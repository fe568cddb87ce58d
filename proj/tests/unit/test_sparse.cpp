#include <gtest/gtest.h>

#include "nspost/error.hpp"
#include "nspost/sparse.hpp"
#include "oracles.hpp"

using namespace nspost;

namespace {

SparseMatrix random_sparse(int rows, int cols, double density, oracles::Sampler& rng) {
  TripletAccumulator acc(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (rng.uniform() < density) acc.add(i, j, rng.uniform(-1.0, 1.0));
    }
  }
  return acc.finalize();
}

/// Small saddle system with an SPD velocity block and a full-rank divergence.
SaddleSystem random_saddle(int nv, int np, bool with_mean, oracles::Sampler& rng) {
  const SparseMatrix r = random_sparse(nv, nv, 0.3, rng);
  Eigen::MatrixXd a = r.to_dense().transpose() * r.to_dense() + nv * Eigen::MatrixXd::Identity(nv, nv);
  TripletAccumulator acc(nv, nv);
  for (int i = 0; i < nv; ++i) {
    for (int j = 0; j < nv; ++j) {
      if (a(i, j) != 0.0) acc.add(i, j, a(i, j));
    }
  }
  TripletAccumulator bacc(np, nv);
  for (int q = 0; q < np; ++q) {
    bacc.add(q, q, 1.0 + rng.uniform());
    bacc.add(q, (q + 3) % nv, rng.uniform(-1.0, 1.0));
  }
  SaddleSystem s{acc.finalize(), bacc.finalize(), std::nullopt};
  if (with_mean) {
    Eigen::VectorXd c = Eigen::VectorXd::Constant(np, 1.0 / np);
    s.mean_constraint = c;
  }
  return s;
}

}  // namespace

TEST(TripletAccumulator, SumsDuplicatesAndKeepsZeros) {
  TripletAccumulator acc(2, 3);
  acc.add(1, 2, 1.5);
  acc.add(0, 0, 1.0);
  acc.add(1, 2, -0.5);
  acc.add(0, 1, 0.0);
  const SparseMatrix m = acc.finalize();
  EXPECT_EQ(m.nnz(), 3u);
  EXPECT_EQ(m.coeff(1, 2), 1.0);
  EXPECT_EQ(m.coeff(0, 0), 1.0);
  EXPECT_EQ(m.coeff(0, 1), 0.0);
  EXPECT_EQ(m.coeff(1, 0), 0.0);
  EXPECT_EQ(m.row_ptr(), (std::vector<int>{0, 2, 3}));
}

TEST(TripletAccumulator, OutOfRangeThrows) {
  TripletAccumulator acc(2, 2);
  acc.add(2, 0, 1.0);
  EXPECT_THROW(acc.finalize(), ConfigError);
}

TEST(SparseMatrix, OperationsMatchDense) {
  oracles::Sampler rng(3);
  const SparseMatrix a = random_sparse(7, 5, 0.4, rng);
  const Eigen::MatrixXd d = a.to_dense();
  const Eigen::VectorXd x = rng.vector(5);
  const Eigen::VectorXd y = rng.vector(7);
  EXPECT_LT((a * x - d * x).norm(), 1e-14);
  EXPECT_LT((a.transpose_times(y) - d.transpose() * y).norm(), 1e-14);
  EXPECT_EQ(a.transposed().to_dense(), d.transpose());
  EXPECT_EQ(a.scaled(-2.0).to_dense(), -2.0 * d);
  EXPECT_EQ(Eigen::MatrixXd(a.to_eigen()), d);
  const SparseMatrix b = random_sparse(7, 5, 0.4, rng);
  EXPECT_LT((linear_combination(0.5, a, 2.0, b).to_dense() - (0.5 * d + 2.0 * b.to_dense())).norm(), 1e-14);
  EXPECT_THROW(a * y, ConfigError);
}

TEST(SparseMatrix, SymmetryDefect) {
  TripletAccumulator acc(3, 3);
  acc.add(0, 1, 2.0);
  acc.add(1, 0, 2.0);
  acc.add(2, 0, 0.25);
  EXPECT_DOUBLE_EQ(acc.finalize().symmetry_defect(), 0.25);
}

TEST(Saddle, BorderedLayout) {
  oracles::Sampler rng(5);
  const SaddleSystem s = random_saddle(6, 3, true, rng);
  const Eigen::MatrixXd k = bordered_matrix(s).to_dense();
  ASSERT_EQ(k.rows(), 10);
  EXPECT_EQ(k.topLeftCorner(6, 6), s.velocity_block.to_dense());
  EXPECT_EQ(k.block(0, 6, 6, 3), -s.divergence.to_dense().transpose());
  EXPECT_EQ(k.block(6, 0, 3, 6), -s.divergence.to_dense());
  EXPECT_EQ(k.block(6, 9, 3, 1), *s.mean_constraint);
  EXPECT_EQ(k.block(9, 6, 1, 3), s.mean_constraint->transpose());
  EXPECT_EQ(k(9, 9), 0.0);
}

TEST(Saddle, FactorizationMatchesDenseOracle) {
  oracles::Sampler rng(17);
  for (bool mean : {false, true}) {
    const SaddleSystem s = random_saddle(14, 5, mean, rng);
    const SaddleFactorization f(s);
    const Eigen::VectorXd rhs = rng.vector(s.size());
    const Eigen::VectorXd x = f.solve(rhs);
    const Eigen::VectorXd ref = oracles::dense_solve(bordered_matrix(s).to_dense(), rhs);
    EXPECT_LT((x - ref).norm() / ref.norm(), 1e-12);
    EXPECT_GT(f.min_pivot(), 0.0);
  }
}

TEST(Saddle, RefactorizeReusesPattern) {
  oracles::Sampler rng(19);
  SaddleSystem s = random_saddle(10, 4, true, rng);
  SaddleFactorization f(s);
  s.velocity_block = s.velocity_block.scaled(3.0);
  f.refactorize(s);
  const Eigen::VectorXd rhs = rng.vector(s.size());
  const Eigen::VectorXd ref = oracles::dense_solve(bordered_matrix(s).to_dense(), rhs);
  EXPECT_LT((f.solve(rhs) - ref).norm() / ref.norm(), 1e-12);
}

TEST(Saddle, RhsSizeMismatchThrows) {
  oracles::Sampler rng(23);
  const SaddleSystem s = random_saddle(6, 2, false, rng);
  const SaddleFactorization f(s);
  EXPECT_THROW(f.solve(Eigen::VectorXd::Zero(3)), ConfigError);
}

TEST(Saddle, StructurallySingularRejected) {
  TripletAccumulator a(3, 3);
  a.add(0, 0, 1.0);
  a.add(1, 1, 1.0);
  a.add(2, 2, 1.0);
  TripletAccumulator b(2, 3);
  b.add(0, 0, 1.0);
  // Pressure row 1 is empty: no velocity couples to it.
  const SaddleSystem s{a.finalize(), b.finalize(), std::nullopt};
  EXPECT_THROW(SaddleFactorization{s}, ConfigError);
}

TEST(Saddle, NumericallySingularRejected) {
  TripletAccumulator a(2, 2);
  a.add(0, 0, 1.0);
  a.add(1, 1, 1.0);
  TripletAccumulator b(2, 2);
  b.add(0, 0, 1.0);
  b.add(0, 1, 1.0);
  b.add(1, 0, 1.0);
  b.add(1, 1, 1.0);
  // Without a mean constraint a rank-deficient divergence leaves a free pressure mode.
  const SaddleSystem s{a.finalize(), b.finalize(), std::nullopt};
  EXPECT_THROW(SaddleFactorization{s}, SolverError);
}

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace nspost {

/// Row-compressed sparse matrix. Column indices are sorted within each row
/// and never duplicated.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_index,
               std::vector<double> values);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  const std::vector<int>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<int>& col_index() const noexcept { return col_index_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Stored value at (i, j), or 0.
  double coeff(int i, int j) const;

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  Eigen::VectorXd transpose_times(const Eigen::VectorXd& x) const;
  SparseMatrix transposed() const;
  SparseMatrix scaled(double alpha) const;

  /// max |A(i,j) - A(j,i)|; requires a square matrix.
  double symmetry_defect() const;

  Eigen::MatrixXd to_dense() const;
  Eigen::SparseMatrix<double> to_eigen() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_index_;
  std::vector<double> values_;
};

/// Collects (row, col, value) contributions; duplicates are summed in
/// insertion order when finalized, so the result is deterministic.
class TripletAccumulator {
 public:
  TripletAccumulator(int rows, int cols) : rows_(rows), cols_(cols) {}

  void add(int i, int j, double v) { entries_.push_back({i, j, v}); }
  void reserve(std::size_t n) { entries_.reserve(n); }
  void append(const SparseMatrix& m, double alpha = 1.0, int row_offset = 0, int col_offset = 0);

  SparseMatrix finalize() const;

 private:
  struct Entry {
    int i;
    int j;
    double v;
  };
  int rows_;
  int cols_;
  std::vector<Entry> entries_;
};

/// alpha*a + beta*b on the union pattern.
SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);

/// Velocity-pressure saddle system. `divergence` holds (psi_q, div phi_v);
/// `mean_constraint` holds the integrals of the pressure basis functions.
struct SaddleSystem {
  SparseMatrix velocity_block;
  SparseMatrix divergence;
  std::optional<Eigen::VectorXd> mean_constraint;

  int n_vel() const noexcept { return velocity_block.rows(); }
  int n_pre() const noexcept { return divergence.rows(); }
  int size() const noexcept { return n_vel() + n_pre() + (mean_constraint ? 1 : 0); }
};

/// Bordered matrix [[A, -B^T, 0], [-B, 0, c], [0, c^T, 0]] in unknowns
/// (u, p, lambda); the last row/column is omitted without a constraint.
SparseMatrix bordered_matrix(const SaddleSystem& system);

/// Reusable LU factorization of a bordered saddle matrix (COLAMD ordering,
/// partial pivoting). Numerically singular systems are rejected: the
/// smallest U pivot must exceed 1e-14 times the largest.
class SaddleFactorization {
 public:
  explicit SaddleFactorization(const SaddleSystem& system);
  ~SaddleFactorization();
  SaddleFactorization(SaddleFactorization&&) noexcept;
  SaddleFactorization& operator=(SaddleFactorization&&) noexcept;

  /// New numeric factorization for a system with an identical pattern.
  void refactorize(const SaddleSystem& system);

  /// Solve with a full right-hand side of length `size()`.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  int size() const noexcept { return size_; }
  int n_vel() const noexcept { return n_vel_; }
  int n_pre() const noexcept { return n_pre_; }
  double min_pivot() const noexcept { return min_pivot_; }
  double max_pivot() const noexcept { return max_pivot_; }

 private:
  struct Impl;
  void numeric(const SaddleSystem& system);

  std::unique_ptr<Impl> impl_;
  int size_ = 0;
  int n_vel_ = 0;
  int n_pre_ = 0;
  double min_pivot_ = 0.0;
  double max_pivot_ = 0.0;
};

inline SaddleFactorization factorize(const SaddleSystem& system) { return SaddleFactorization(system); }
inline Eigen::VectorXd solve(const SaddleFactorization& fact, const Eigen::VectorXd& rhs) {
  return fact.solve(rhs);
}

}  // namespace nspost

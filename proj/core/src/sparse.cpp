#include "nspost/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/SparseLU>

#include "nspost/error.hpp"

namespace nspost {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_index,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_index_(std::move(col_index)),
      values_(std::move(values)) {
  if (static_cast<int>(row_ptr_.size()) != rows_ + 1 || col_index_.size() != values_.size() ||
      row_ptr_.back() != static_cast<int>(values_.size())) {
    throw ConfigError("SparseMatrix: inconsistent CSR arrays");
  }
}

double SparseMatrix::coeff(int i, int j) const {
  const auto begin = col_index_.begin() + row_ptr_[static_cast<std::size_t>(i)];
  const auto end = col_index_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_index_.begin())];
}

Eigen::VectorXd SparseMatrix::operator*(const Eigen::VectorXd& x) const {
  if (x.size() != cols_) throw ConfigError("SparseMatrix: dimension mismatch in product");
  Eigen::VectorXd y(rows_);
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      s += values_[static_cast<std::size_t>(k)] * x[col_index_[static_cast<std::size_t>(k)]];
    }
    y[i] = s;
  }
  return y;
}

Eigen::VectorXd SparseMatrix::transpose_times(const Eigen::VectorXd& x) const {
  if (x.size() != rows_) throw ConfigError("SparseMatrix: dimension mismatch in transpose product");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      y[col_index_[static_cast<std::size_t>(k)]] += values_[static_cast<std::size_t>(k)] * x[i];
    }
  }
  return y;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<int> ptr(static_cast<std::size_t>(cols_) + 1, 0);
  for (int c : col_index_) ++ptr[static_cast<std::size_t>(c) + 1];
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  std::vector<int> next(ptr.begin(), ptr.end() - 1);
  std::vector<int> idx(values_.size());
  std::vector<double> val(values_.size());
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      const int pos = next[static_cast<std::size_t>(col_index_[static_cast<std::size_t>(k)])]++;
      idx[static_cast<std::size_t>(pos)] = i;
      val[static_cast<std::size_t>(pos)] = values_[static_cast<std::size_t>(k)];
    }
  }
  return {cols_, rows_, std::move(ptr), std::move(idx), std::move(val)};
}

SparseMatrix SparseMatrix::scaled(double alpha) const {
  std::vector<double> val(values_);
  for (double& v : val) v *= alpha;
  return {rows_, cols_, row_ptr_, col_index_, std::move(val)};
}

double SparseMatrix::symmetry_defect() const {
  if (rows_ != cols_) throw ConfigError("symmetry_defect: matrix is not square");
  const SparseMatrix t = transposed();
  double defect = 0.0;
  const SparseMatrix diff = linear_combination(1.0, *this, -1.0, t);
  for (double v : diff.values()) defect = std::max(defect, std::abs(v));
  return defect;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      d(i, col_index_[static_cast<std::size_t>(k)]) += values_[static_cast<std::size_t>(k)];
    }
  }
  return d;
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(rows_, cols_);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      t.emplace_back(i, col_index_[static_cast<std::size_t>(k)], values_[static_cast<std::size_t>(k)]);
    }
  }
  m.setFromTriplets(t.begin(), t.end());
  return Eigen::SparseMatrix<double>(m);
}

void TripletAccumulator::append(const SparseMatrix& m, double alpha, int row_offset, int col_offset) {
  const auto& ptr = m.row_ptr();
  const auto& col = m.col_index();
  const auto& val = m.values();
  for (int i = 0; i < m.rows(); ++i) {
    for (int k = ptr[static_cast<std::size_t>(i)]; k < ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      add(i + row_offset, col[static_cast<std::size_t>(k)] + col_offset, alpha * val[static_cast<std::size_t>(k)]);
    }
  }
}

SparseMatrix TripletAccumulator::finalize() const {
  std::vector<std::size_t> order(entries_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    const Entry& x = entries_[a];
    const Entry& y = entries_[b];
    return x.i != y.i ? x.i < y.i : x.j < y.j;
  });
  std::vector<int> ptr(static_cast<std::size_t>(rows_) + 1, 0);
  std::vector<int> idx;
  std::vector<double> val;
  idx.reserve(entries_.size());
  val.reserve(entries_.size());
  int last_i = -1;
  int last_j = -1;
  for (std::size_t o : order) {
    const Entry& e = entries_[o];
    if (e.i < 0 || e.i >= rows_ || e.j < 0 || e.j >= cols_) {
      throw ConfigError("TripletAccumulator: entry out of range");
    }
    if (e.i == last_i && e.j == last_j) {
      val.back() += e.v;
    } else {
      idx.push_back(e.j);
      val.push_back(e.v);
      ++ptr[static_cast<std::size_t>(e.i) + 1];
      last_i = e.i;
      last_j = e.j;
    }
  }
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  return {rows_, cols_, std::move(ptr), std::move(idx), std::move(val)};
}

SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ConfigError("linear_combination: dimension mismatch");
  }
  TripletAccumulator acc(a.rows(), a.cols());
  acc.reserve(a.nnz() + b.nnz());
  acc.append(a, alpha);
  acc.append(b, beta);
  return acc.finalize();
}

SparseMatrix bordered_matrix(const SaddleSystem& s) {
  const int nv = s.n_vel();
  const int np = s.n_pre();
  if (s.velocity_block.cols() != nv || s.divergence.cols() != nv) {
    throw ConfigError("SaddleSystem: block dimensions are inconsistent");
  }
  if (s.mean_constraint && s.mean_constraint->size() != np) {
    throw ConfigError("SaddleSystem: mean constraint length differs from the pressure block");
  }
  TripletAccumulator acc(s.size(), s.size());
  acc.reserve(s.velocity_block.nnz() + 2 * s.divergence.nnz() + 2 * static_cast<std::size_t>(np));
  acc.append(s.velocity_block);
  acc.append(s.divergence, -1.0, nv, 0);
  acc.append(s.divergence.transposed(), -1.0, 0, nv);
  if (s.mean_constraint) {
    const int last = nv + np;
    for (int q = 0; q < np; ++q) {
      acc.add(nv + q, last, (*s.mean_constraint)[q]);
      acc.add(last, nv + q, (*s.mean_constraint)[q]);
    }
  }
  return acc.finalize();
}

namespace {

using ColMajor = Eigen::SparseMatrix<double>;

/// SparseLU with access to the diagonal of U (stored in the supernodal L).
class AuditedLU : public Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>> {
 public:
  std::pair<double, double> pivot_range() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Eigen::Index j = 0; j < cols(); ++j) {
      double d = 0.0;
      for (SCMatrix::InnerIterator it(m_Lstore, j); it; ++it) {
        if (it.index() == j) {
          d = std::abs(it.value());
          break;
        }
      }
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    return {lo, hi};
  }
};

void check_structure(const SparseMatrix& m) {
  std::vector<char> col_used(static_cast<std::size_t>(m.cols()), 0);
  for (int i = 0; i < m.rows(); ++i) {
    bool any = false;
    for (int k = m.row_ptr()[static_cast<std::size_t>(i)]; k < m.row_ptr()[static_cast<std::size_t>(i) + 1]; ++k) {
      if (m.values()[static_cast<std::size_t>(k)] != 0.0) {
        any = true;
        col_used[static_cast<std::size_t>(m.col_index()[static_cast<std::size_t>(k)])] = 1;
      }
    }
    if (!any) throw ConfigError("saddle system is structurally singular: row " + std::to_string(i) + " is empty");
  }
  for (int j = 0; j < m.cols(); ++j) {
    if (!col_used[static_cast<std::size_t>(j)]) {
      throw ConfigError("saddle system is structurally singular: column " + std::to_string(j) + " is empty");
    }
  }
}

}  // namespace

struct SaddleFactorization::Impl {
  AuditedLU lu;
};

SaddleFactorization::SaddleFactorization(const SaddleSystem& system) : impl_(std::make_unique<Impl>()) {
  const SparseMatrix m = bordered_matrix(system);
  check_structure(m);
  const ColMajor e = m.to_eigen();
  impl_->lu.analyzePattern(e);
  size_ = system.size();
  n_vel_ = system.n_vel();
  n_pre_ = system.n_pre();
  numeric(system);
}

SaddleFactorization::~SaddleFactorization() = default;
SaddleFactorization::SaddleFactorization(SaddleFactorization&&) noexcept = default;
SaddleFactorization& SaddleFactorization::operator=(SaddleFactorization&&) noexcept = default;

void SaddleFactorization::refactorize(const SaddleSystem& system) {
  if (system.size() != size_ || system.n_vel() != n_vel_) {
    throw ConfigError("refactorize: system dimensions changed");
  }
  numeric(system);
}

void SaddleFactorization::numeric(const SaddleSystem& system) {
  const ColMajor e = bordered_matrix(system).to_eigen();
  impl_->lu.factorize(e);
  if (impl_->lu.info() != Eigen::Success) {
    throw SolverError("saddle factorization failed: " + impl_->lu.lastErrorMessage());
  }
  std::tie(min_pivot_, max_pivot_) = impl_->lu.pivot_range();
  if (!(min_pivot_ >= 1e-14 * max_pivot_)) {
    std::ostringstream msg;
    msg << "saddle system is numerically singular: min |pivot| = " << min_pivot_
        << ", max |pivot| = " << max_pivot_ << " (size " << size_ << ")";
    throw SolverError(msg.str());
  }
}

Eigen::VectorXd SaddleFactorization::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != size_) {
    throw ConfigError("solve: rhs length " + std::to_string(rhs.size()) + " != system size " +
                      std::to_string(size_));
  }
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  return x;
}

}  // namespace nspost

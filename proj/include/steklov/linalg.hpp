#pragma once

// Dense symmetric linear algebra: packed storage, Cholesky, SPD solves and the
// symmetric (generalized) eigensolver used for the Steklov pencil.

#include <cstddef>
#include <span>
#include <vector>

namespace steklov::linalg {

/// Dense column-major matrix.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }

  std::span<const double> data() const noexcept { return data_; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric matrix, lower triangle packed by rows: row i holds (i,0) .. (i,i).
class SymMatrix {
public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * (n + 1) / 2, 0.0) {}

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return i >= j ? data_[offset(i) + j] : data_[offset(j) + i];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return i >= j ? data_[offset(i) + j] : data_[offset(j) + i];
  }

  /// Lower row i, columns 0..i inclusive.
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + offset(i), i + 1}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + offset(i), i + 1};
  }

  std::span<const double> packed() const noexcept { return data_; }

  std::vector<double> multiply(std::span<const double> x) const;
  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;
  Matrix to_dense() const;

private:
  static constexpr std::size_t offset(std::size_t i) noexcept { return i * (i + 1) / 2; }

  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Lower Cholesky factor L with A = L L^T.
class Cholesky {
public:
  /// Throws NotPositiveDefinite with the failing row.
  explicit Cholesky(SymMatrix a);

  std::size_t size() const noexcept { return l_.size(); }
  const SymMatrix& factor() const noexcept { return l_; }

  /// In place: b <- L^{-1} b
  void forward(std::span<double> b) const;
  /// In place: b <- L^{-T} b
  void backward(std::span<double> b) const;
  /// In place: b <- A^{-1} b
  void solve(std::span<double> b) const {
    forward(b);
    backward(b);
  }

private:
  SymMatrix l_;
};

/// Solves A X = B for SPD A and a block of right-hand sides.
Matrix spd_solve(const SymMatrix& a, const Matrix& b);
std::vector<double> spd_solve(const SymMatrix& a, std::span<const double> b);

struct EigenPairs {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
};

/// Symmetric eigendecomposition (Householder tridiagonalisation + implicit QL).
/// Returns the lowest `count` pairs (all when count == 0 or count > n).
EigenPairs sym_eig(const SymMatrix& a, std::size_t count = 0);

/// Lowest `count` pairs of A x = mu B x, B positive definite, vectors B-orthonormal.
EigenPairs sym_generalized_eig(const SymMatrix& a, const SymMatrix& b, std::size_t count = 0);

}  // namespace steklov::linalg

#pragma once

// Compressed sparse rows plus an envelope (profile) Cholesky factorisation
// under a reverse Cuthill-McKee ordering.

#include <cstddef>
#include <span>
#include <vector>

#include "steklov/linalg.hpp"

namespace steklov::linalg {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

class CsrMatrix {
public:
  CsrMatrix() = default;
  /// Duplicate (row, col) entries are summed.
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_cols(std::size_t i) const noexcept {
    return {cols_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_values(std::size_t i) const noexcept {
    return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  double at(std::size_t i, std::size_t j) const noexcept;
  std::vector<double> multiply(std::span<const double> x) const;

  /// Submatrix with the given row and column index lists.
  CsrMatrix block(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;
  SymMatrix to_sym() const;

  bool operator==(const CsrMatrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> cols_idx_;
  std::vector<double> values_;
};

/// Reverse Cuthill-McKee permutation of a structurally symmetric matrix.
/// Returns perm with perm[new_index] = old_index.
std::vector<std::size_t> reverse_cuthill_mckee(const CsrMatrix& a);

/// Envelope Cholesky P A P^T = L L^T with RCM ordering P.
class ProfileCholesky {
public:
  explicit ProfileCholesky(const CsrMatrix& a);

  std::size_t size() const noexcept { return first_.size(); }
  std::size_t envelope_size() const noexcept { return values_.size(); }

  /// b <- A^{-1} b (original ordering)
  void solve(std::span<double> b) const;
  /// Forward substitution in permuted ordering: on entry b holds P*rhs, nonzero from `start`.
  void forward_permuted(std::span<double> b, std::size_t start = 0) const;
  void backward_permuted(std::span<double> b) const;

  std::span<const std::size_t> permutation() const noexcept { return perm_; }
  std::span<const std::size_t> inverse_permutation() const noexcept { return inverse_; }

private:
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + offset_[i], i - first_[i] + 1};
  }
  std::span<double> row(std::size_t i) noexcept {
    return {values_.data() + offset_[i], i - first_[i] + 1};
  }

  std::vector<std::size_t> perm_;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> first_;
  std::vector<std::size_t> offset_;
  std::vector<double> values_;
};

}  // namespace steklov::linalg

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "steklov/error.hpp"
#include "steklov/kernels.hpp"
#include "steklov/sparse.hpp"

namespace steklov::linalg {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& x, const Triplet& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  row_ptr_.assign(rows + 1, 0);
  std::size_t last_row = std::numeric_limits<std::size_t>::max();
  std::size_t last_col = last_row;
  for (const Triplet& t : entries) {
    if (t.row >= rows || t.col >= cols) throw Error("sparse entry out of range");
    if (t.row == last_row && t.col == last_col) {
      values_.back() += t.value;
      continue;
    }
    cols_idx_.push_back(t.col);
    values_.push_back(t.value);
    ++row_ptr_[t.row + 1];
    last_row = t.row;
    last_col = t.col;
  }
  for (std::size_t i = 0; i < rows; ++i) row_ptr_[i + 1] += row_ptr_[i];
}

double CsrMatrix::at(std::size_t i, std::size_t j) const noexcept {
  const auto c = row_cols(i);
  const auto it = std::lower_bound(c.begin(), c.end(), j);
  if (it == c.end() || *it != j) return 0.0;
  return row_values(i)[static_cast<std::size_t>(it - c.begin())];
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto c = row_cols(i);
    const auto v = row_values(i);
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += v[k] * x[c[k]];
    y[i] = s;
  }
  return y;
}

CsrMatrix CsrMatrix::block(std::span<const std::size_t> rows,
                           std::span<const std::size_t> cols) const {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> col_map(cols_, none);
  for (std::size_t k = 0; k < cols.size(); ++k) col_map[cols[k]] = k;
  std::vector<Triplet> entries;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto c = row_cols(rows[r]);
    const auto v = row_values(rows[r]);
    for (std::size_t k = 0; k < c.size(); ++k)
      if (col_map[c[k]] != none) entries.push_back({r, col_map[c[k]], v[k]});
  }
  return CsrMatrix(rows.size(), cols.size(), std::move(entries));
}

SymMatrix CsrMatrix::to_sym() const {
  SymMatrix s(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto c = row_cols(i);
    const auto v = row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k)
      if (c[k] <= i) s(i, c[k]) = v[k];
  }
  return s;
}

namespace {

struct Bfs {
  std::vector<std::size_t> order;
  std::size_t depth = 0;
  std::size_t last_level_begin = 0;
};

Bfs level_structure(const CsrMatrix& a, std::size_t root, std::vector<char>& seen,
                    const std::vector<std::size_t>& degree) {
  Bfs out;
  out.order.push_back(root);
  seen[root] = 1;
  std::size_t level_begin = 0;
  while (level_begin < out.order.size()) {
    const std::size_t level_end = out.order.size();
    out.last_level_begin = level_begin;
    for (std::size_t q = level_begin; q < level_end; ++q) {
      std::vector<std::size_t> next;
      for (std::size_t nb : a.row_cols(out.order[q]))
        if (!seen[nb]) {
          seen[nb] = 1;
          next.push_back(nb);
        }
      std::sort(next.begin(), next.end(), [&](std::size_t x, std::size_t y) {
        return degree[x] != degree[y] ? degree[x] < degree[y] : x < y;
      });
      out.order.insert(out.order.end(), next.begin(), next.end());
    }
    level_begin = level_end;
    ++out.depth;
  }
  return out;
}

}  // namespace

std::vector<std::size_t> reverse_cuthill_mckee(const CsrMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> degree(n);
  for (std::size_t i = 0; i < n; ++i) degree[i] = a.row_cols(i).size();

  std::vector<char> placed(n, 0);
  std::vector<std::size_t> perm;
  perm.reserve(n);
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (placed[seed]) continue;
    // pseudo-peripheral root (George-Liu): walk to the lowest-degree node of the last level
    std::size_t root = seed;
    std::size_t depth = 0;
    for (int iter = 0; iter < 8; ++iter) {
      std::vector<char> seen = placed;
      const Bfs bfs = level_structure(a, root, seen, degree);
      if (iter > 0 && bfs.depth <= depth) break;
      depth = bfs.depth;
      std::size_t best = bfs.order[bfs.last_level_begin];
      for (std::size_t q = bfs.last_level_begin; q < bfs.order.size(); ++q)
        if (degree[bfs.order[q]] < degree[best]) best = bfs.order[q];
      if (best == root) break;
      root = best;
    }
    const Bfs bfs = level_structure(a, root, placed, degree);
    perm.insert(perm.end(), bfs.order.begin(), bfs.order.end());
  }
  std::reverse(perm.begin(), perm.end());
  return perm;
}

ProfileCholesky::ProfileCholesky(const CsrMatrix& a) {
  const std::size_t n = a.rows();
  perm_ = reverse_cuthill_mckee(a);
  inverse_.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) inverse_[perm_[k]] = k;

  first_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t f = i;
    for (std::size_t old_col : a.row_cols(perm_[i])) f = std::min(f, inverse_[old_col]);
    first_[i] = f;
  }
  offset_.assign(n, 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    offset_[i] = total;
    total += i - first_[i] + 1;
  }
  values_.assign(total, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = a.row_cols(perm_[i]);
    const auto v = a.row_values(perm_[i]);
    auto r = row(i);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const std::size_t j = inverse_[c[k]];
      if (j <= i) r[j - first_[i]] = v[k];
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto li = row(i);
    const std::size_t fi = first_[i];
    for (std::size_t j = fi; j < i; ++j) {
      const auto lj = row(j);
      const std::size_t k0 = std::max(fi, first_[j]);
      const double s = kernels::dot(li.subspan(k0 - fi, j - k0), lj.subspan(k0 - first_[j], j - k0));
      li[j - fi] = (li[j - fi] - s) / lj[j - first_[j]];
    }
    const auto prefix = li.subspan(0, i - fi);
    const double pivot = li[i - fi] - kernels::dot(prefix, prefix);
    if (!(pivot > 0.0)) throw NotPositiveDefinite(perm_[i], pivot);
    li[i - fi] = std::sqrt(pivot);
  }
}

void ProfileCholesky::forward_permuted(std::span<double> b, std::size_t start) const {
  const std::size_t n = size();
  for (std::size_t i = start; i < n; ++i) {
    const auto li = row(i);
    const std::size_t lo = std::max(first_[i], start);
    const double s =
        kernels::dot(li.subspan(lo - first_[i], i - lo), std::span<const double>(b).subspan(lo, i - lo));
    b[i] = (b[i] - s) / li[i - first_[i]];
  }
}

void ProfileCholesky::backward_permuted(std::span<double> b) const {
  for (std::size_t i = size(); i-- > 0;) {
    const auto li = row(i);
    const std::size_t fi = first_[i];
    b[i] /= li[i - fi];
    kernels::axpy(-b[i], li.subspan(0, i - fi), b.subspan(fi, i - fi));
  }
}

void ProfileCholesky::solve(std::span<double> b) const {
  const std::size_t n = size();
  std::vector<double> work(n);
  for (std::size_t k = 0; k < n; ++k) work[k] = b[perm_[k]];
  forward_permuted(work);
  backward_permuted(work);
  for (std::size_t k = 0; k < n; ++k) b[perm_[k]] = work[k];
}

}  // namespace steklov::linalg

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "steklov/error.hpp"
#include "steklov/kernels.hpp"
#include "steklov/linalg.hpp"

namespace steklov::linalg {

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

std::vector<double> SymMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    auto r = row(i);
    // diagonal and below via the packed row, above via its transpose
    y[i] += kernels::dot(r, x.subspan(0, i + 1));
    kernels::axpy(x[i], r.subspan(0, i), std::span<double>(y).subspan(0, i));
  }
  return y;
}

double SymMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double SymMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = (*this)(i, j);
      s += (i == j ? 1.0 : 2.0) * v * v;
    }
  }
  return std::sqrt(s);
}

Matrix SymMatrix::to_dense() const {
  Matrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Cholesky::Cholesky(SymMatrix a) : l_(std::move(a)) {
  const std::size_t n = l_.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto li = l_.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      auto lj = l_.row(j);
      li[j] = (li[j] - kernels::dot(li.subspan(0, j), lj.subspan(0, j))) / lj[j];
    }
    const double pivot = li[i] - kernels::dot(li.subspan(0, i), li.subspan(0, i));
    if (!(pivot > 0.0)) throw NotPositiveDefinite(i, pivot);
    li[i] = std::sqrt(pivot);
  }
}

void Cholesky::forward(std::span<double> b) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    auto li = l_.row(i);
    b[i] = (b[i] - kernels::dot(li.subspan(0, i), b.subspan(0, i))) / li[i];
  }
}

void Cholesky::backward(std::span<double> b) const {
  for (std::size_t i = size(); i-- > 0;) {
    auto li = l_.row(i);
    b[i] /= li[i];
    kernels::axpy(-b[i], li.subspan(0, i), b.subspan(0, i));
  }
}

Matrix spd_solve(const SymMatrix& a, const Matrix& b) {
  const Cholesky chol(a);
  Matrix x = b;
  for (std::size_t j = 0; j < x.cols(); ++j) chol.solve(x.col(j));
  return x;
}

std::vector<double> spd_solve(const SymMatrix& a, std::span<const double> b) {
  const Cholesky chol(a);
  std::vector<double> x(b.begin(), b.end());
  chol.solve(x);
  return x;
}

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1; off[n-1] == 0
  std::vector<double> tau;
  Matrix reflectors;  // column i holds v_i (entries i+1.. are meaningful, v_i[i+1] == 1)
};

// Lower-triangular Householder reduction A = Q T Q^T, Q = H_0 H_1 ... H_{n-3}.
Tridiagonal tridiagonalize(SymMatrix a) {
  const std::size_t n = a.size();
  Tridiagonal t;
  t.diag.assign(n, 0.0);
  t.off.assign(n, 0.0);
  t.tau.assign(n, 0.0);
  t.reflectors = Matrix(n, n);
  std::vector<double> w(n, 0.0);

  for (std::size_t i = 0; i + 2 < n; ++i) {
    const std::size_t lo = i + 1;
    auto v = t.reflectors.col(i);
    double alpha = a(lo, i);
    double sigma = 0.0;
    for (std::size_t r = lo + 1; r < n; ++r) sigma += a(r, i) * a(r, i);
    if (sigma == 0.0) {
      t.off[i] = alpha;
      continue;
    }
    const double beta = -std::copysign(std::hypot(alpha, std::sqrt(sigma)), alpha);
    const double tau = (beta - alpha) / beta;
    const double scale = 1.0 / (alpha - beta);
    v[lo] = 1.0;
    for (std::size_t r = lo + 1; r < n; ++r) v[r] = a(r, i) * scale;
    t.tau[i] = tau;
    t.off[i] = beta;

    // x = tau * A22 v over the trailing block
    std::fill(w.begin() + lo, w.end(), 0.0);
    for (std::size_t r = lo; r < n; ++r) {
      auto ar = a.row(r).subspan(lo, r - lo + 1);
      auto vr = std::span<const double>(v).subspan(lo, r - lo + 1);
      w[r] += kernels::dot(ar, vr);
      kernels::axpy(v[r], ar.subspan(0, r - lo), std::span<double>(w).subspan(lo, r - lo));
    }
    double xv = 0.0;
    for (std::size_t r = lo; r < n; ++r) {
      w[r] *= tau;
      xv += w[r] * v[r];
    }
    const double mu = -0.5 * tau * xv;
    for (std::size_t r = lo; r < n; ++r) w[r] += mu * v[r];

    // A22 -= v w^T + w v^T
    for (std::size_t r = lo; r < n; ++r) {
      auto ar = a.row(r).subspan(lo, r - lo + 1);
      kernels::axpy2(-v[r], std::span<const double>(w).subspan(lo, r - lo + 1), -w[r],
                     std::span<const double>(v).subspan(lo, r - lo + 1), ar);
    }
  }
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = a(i, i);
  if (n >= 2) t.off[n - 2] = a(n - 1, n - 2);
  t.off[n - 1] = 0.0;
  return t;
}

// Implicit-shift QL on (d, e); rotations accumulated into the columns of z.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Matrix& z) {
  const int n = static_cast<int>(d.size());
  constexpr int max_sweeps = 60;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int sweeps = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++sweeps > max_sweeps) throw ConvergenceError("tridiagonal QL did not converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i;
      bool underflow = false;
      for (i = m - 1; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        kernels::rot(z.col(i), z.col(i + 1), c, s);
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (true);
  }
}

}  // namespace

EigenPairs sym_eig(const SymMatrix& a, std::size_t count) {
  const std::size_t n = a.size();
  if (count == 0 || count > n) count = n;
  EigenPairs out;
  if (n == 0) return out;

  Tridiagonal t = tridiagonalize(a);
  Matrix z(n, n);
  for (std::size_t i = 0; i < n; ++i) z(i, i) = 1.0;
  tridiagonal_ql(t.diag, t.off, z);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return t.diag[x] < t.diag[y]; });

  out.values.resize(count);
  out.vectors = Matrix(n, count);
  for (std::size_t k = 0; k < count; ++k) {
    out.values[k] = t.diag[order[k]];
    auto dst = out.vectors.col(k);
    auto src = z.col(order[k]);
    std::copy(src.begin(), src.end(), dst.begin());
    // apply Q = H_0 ... H_{n-3}, innermost reflector first
    for (std::size_t i = n >= 2 ? n - 2 : 0; i-- > 0;) {
      if (t.tau[i] == 0.0) continue;
      auto v = std::span<const double>(t.reflectors.col(i)).subspan(i + 1);
      auto x = dst.subspan(i + 1);
      kernels::axpy(-t.tau[i] * kernels::dot(v, x), v, x);
    }
  }
  return out;
}

EigenPairs sym_generalized_eig(const SymMatrix& a, const SymMatrix& b, std::size_t count) {
  const std::size_t n = a.size();
  const Cholesky chol(b);

  // C = L^{-1} A L^{-T}: solve column-wise twice using the symmetry of A.
  Matrix y(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto col = y.col(j);
    for (std::size_t i = 0; i < n; ++i) col[i] = a(i, j);
    chol.forward(col);
  }
  // y = L^{-1} A; rows of y are columns of A L^{-T}
  Matrix yt(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) yt(i, j) = y(j, i);
  SymMatrix c(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto col = yt.col(j);
    chol.forward(col);
    for (std::size_t i = j; i < n; ++i) c(i, j) = col[i];
  }
  // symmetrise against round-off: take the average of both triangles
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) c(i, j) = 0.5 * (c(i, j) + yt(j, i));

  EigenPairs pairs = sym_eig(c, count);
  for (std::size_t k = 0; k < pairs.values.size(); ++k) chol.backward(pairs.vectors.col(k));
  return pairs;
}

}  // namespace steklov::linalg

#include "steklov/kernels.hpp"

namespace steklov::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  // Four partial sums, same association as the vector variants use per lane.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy2_scalar(double a, const double* x, double b, const double* z, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i] + b * z[i];
}

void rot_scalar(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

}  // namespace

namespace detail {
const KernelTable scalar_table{Backend::Scalar, dot_scalar, axpy_scalar, axpy2_scalar, rot_scalar};
}

}  // namespace steklov::kernels

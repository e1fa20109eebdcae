#include "steklov/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#define STEKLOV_HAVE_NEON_KERNELS 1
#include <arm_neon.h>
#else
#define STEKLOV_HAVE_NEON_KERNELS 0
#endif

namespace steklov::kernels {

#if STEKLOV_HAVE_NEON_KERNELS
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void axpy2_neon(double a, const double* x, double b, const double* z, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i));
    vst1q_f64(y + i, vfmaq_f64(acc, vb, vld1q_f64(z + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i] + b * z[i];
}

void rot_neon(double* x, double* y, std::size_t n, double c, double s) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xi = vld1q_f64(x + i);
    const float64x2_t yi = vld1q_f64(y + i);
    vst1q_f64(x + i, vfmsq_f64(vmulq_f64(vc, xi), vs, yi));
    vst1q_f64(y + i, vfmaq_f64(vmulq_f64(vc, yi), vs, xi));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

const KernelTable neon{Backend::Neon, dot_neon, axpy_neon, axpy2_neon, rot_neon};

}  // namespace

namespace detail {
// Advanced SIMD is mandatory on aarch64.
const KernelTable* neon_table() noexcept { return &neon; }
}  // namespace detail

#else

namespace detail {
const KernelTable* neon_table() noexcept { return nullptr; }
}  // namespace detail

#endif

}  // namespace steklov::kernels

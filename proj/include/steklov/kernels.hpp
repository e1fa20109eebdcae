#pragma once

// Data-parallel inner loops shared by the dense and profile solvers.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is
// chosen once at startup from the CPU feature bits; STEKLOV_KERNELS=scalar
// (or avx2 / neon) in the environment overrides the choice.

#include <cassert>
#include <cstddef>
#include <span>
#include <string_view>

namespace steklov::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y += a*x + b*z
  void (*axpy2)(double a, const double* x, double b, const double* z, double* y, std::size_t n);
  // (x, y) <- (c*x - s*y, s*x + c*y)
  void (*rot)(double* x, double* y, std::size_t n, double c, double s);
};

namespace detail {
extern const KernelTable scalar_table;
const KernelTable* avx2_table() noexcept;  // nullptr when not compiled in
const KernelTable* neon_table() noexcept;  // nullptr when not compiled in
const KernelTable& active_table() noexcept;
}  // namespace detail

std::string_view backend_name(Backend b) noexcept;

/// Backend currently used by the free functions below.
Backend active_backend() noexcept;

/// True when `b` is compiled in and the running CPU supports it.
bool backend_available(Backend b) noexcept;

/// Switches the process-wide backend. Returns false (and changes nothing) if unavailable.
bool set_backend(Backend b) noexcept;

/// Explicit table for `b`, or nullptr when unavailable. Used by equivalence tests.
const KernelTable* table_for(Backend b) noexcept;

inline double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return detail::active_table().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  detail::active_table().axpy(a, x.data(), y.data(), x.size());
}

inline void axpy2(double a, std::span<const double> x, double b, std::span<const double> z,
                  std::span<double> y) {
  assert(x.size() == y.size() && z.size() == y.size());
  detail::active_table().axpy2(a, x.data(), b, z.data(), y.data(), y.size());
}

inline void rot(std::span<double> x, std::span<double> y, double c, double s) {
  assert(x.size() == y.size());
  detail::active_table().rot(x.data(), y.data(), x.size(), c, s);
}

/// RAII guard that forces a backend for the lifetime of the object.
class ScopedBackend {
public:
  explicit ScopedBackend(Backend b) : previous_(active_backend()), ok_(set_backend(b)) {}
  ~ScopedBackend() { set_backend(previous_); }
  ScopedBackend(const ScopedBackend&) = delete;
  ScopedBackend& operator=(const ScopedBackend&) = delete;
  bool ok() const noexcept { return ok_; }

private:
  Backend previous_;
  bool ok_;
};

}  // namespace steklov::kernels

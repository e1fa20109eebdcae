#include <atomic>
#include <cstdlib>
#include <string_view>

#include "steklov/kernels.hpp"

namespace steklov::kernels {
namespace {

const KernelTable* best_available() noexcept {
  if (const char* env = std::getenv("STEKLOV_KERNELS")) {
    const std::string_view want{env};
    if (want == "scalar") return &detail::scalar_table;
    if (want == "avx2" && detail::avx2_table()) return detail::avx2_table();
    if (want == "neon" && detail::neon_table()) return detail::neon_table();
  }
  if (const auto* t = detail::avx2_table()) return t;
  if (const auto* t = detail::neon_table()) return t;
  return &detail::scalar_table;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{best_available()};
  return table;
}

}  // namespace

namespace detail {
const KernelTable& active_table() noexcept { return *current().load(std::memory_order_relaxed); }
}  // namespace detail

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar: return &detail::scalar_table;
    case Backend::Avx2: return detail::avx2_table();
    case Backend::Neon: return detail::neon_table();
  }
  return nullptr;
}

Backend active_backend() noexcept { return detail::active_table().backend; }

bool backend_available(Backend b) noexcept { return table_for(b) != nullptr; }

bool set_backend(Backend b) noexcept {
  const KernelTable* t = table_for(b);
  if (!t) return false;
  current().store(t, std::memory_order_relaxed);
  return true;
}

}  // namespace steklov::kernels

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "dfock/errors.hpp"
#include "kernels_internal.hpp"

namespace dfock::kernels {
namespace {

bool cpu_supports_avx2() noexcept {
#if defined(DFOCK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* initial_table() noexcept {
  const char* env = std::getenv("DFOCK_ISA");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &detail::scalar_impl();
  if (const Table* t = avx2_table()) return t;
  return &detail::scalar_impl();
}

std::atomic<const Table*>& current() noexcept {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

}  // namespace

const Table& scalar_table() noexcept { return detail::scalar_impl(); }

const Table* avx2_table() noexcept {
#if defined(DFOCK_HAVE_AVX2)
  static const bool supported = cpu_supports_avx2();
  return supported ? &detail::avx2_impl() : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() noexcept { return *current().load(std::memory_order_acquire); }

Isa active_isa() noexcept { return active().isa; }

void select(Isa isa) {
  if (isa == Isa::Scalar) {
    current().store(&detail::scalar_impl(), std::memory_order_release);
    return;
  }
  const Table* t = avx2_table();
  require(t != nullptr, ErrorKind::InvalidArgument, "AVX2 kernels are not available on this build or CPU");
  current().store(t, std::memory_order_release);
}

const char* name(Isa isa) noexcept { return isa == Isa::Scalar ? "scalar" : "avx2"; }

}  // namespace dfock::kernels

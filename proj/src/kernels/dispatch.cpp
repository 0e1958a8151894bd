#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string_view>

#include "modhyp/kernels.hpp"

namespace modhyp::kernels {

const Ops* avx2_ops_impl();  // defined in avx2.cpp (nullptr when not built)

const Ops* avx2_ops() {
#if defined(MODHYP_WITH_AVX2)
  static const Ops* ops = [] {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
      return avx2_ops_impl();
    return static_cast<const Ops*>(nullptr);
  }();
  return ops;
#else
  return nullptr;
#endif
}

namespace {

std::atomic<const Ops*> g_active{nullptr};

const Ops* pick_default() {
  if (const char* env = std::getenv("MODHYP_KERNEL")) {
    std::string_view want(env);
    if (want == "scalar") return &scalar_ops();
    if (want == "avx2" && avx2_ops()) return avx2_ops();
  }
  if (const Ops* v = avx2_ops()) return v;
  return &scalar_ops();
}

}  // namespace

const Ops& active_ops() {
  const Ops* ops = g_active.load(std::memory_order_acquire);
  if (!ops) {
    ops = pick_default();
    g_active.store(ops, std::memory_order_release);
  }
  return *ops;
}

bool set_active_ops(std::string_view name) {
  if (name == "scalar") {
    g_active.store(&scalar_ops(), std::memory_order_release);
    return true;
  }
  if (name == "avx2") {
    if (const Ops* v = avx2_ops()) {
      g_active.store(v, std::memory_order_release);
      return true;
    }
    return false;
  }
  return false;
}

void square_mod_range(std::uint64_t c, std::uint64_t x0, std::size_t count,
                      std::uint64_t* out) {
  const Ops& ops = active_ops();
  if (&ops != &scalar_ops() &&
      (c > kSquareModSimdMaxModulus || x0 + count > c)) {
    scalar_ops().square_mod_range(c, x0, count, out);
    return;
  }
  ops.square_mod_range(c, x0, count, out);
}

void fermat_sqrt_scan(std::uint64_t n, const std::uint64_t* xs, std::size_t count,
                      std::uint64_t* ys, std::uint8_t* is_square) {
  const Ops& ops = active_ops();
  if (&ops != &scalar_ops() && count > 0) {
    std::uint64_t xmax = 0;
    for (std::size_t i = 0; i < count; ++i) xmax = std::max(xmax, xs[i]);
    if (xmax >= (std::uint64_t(1) << 26) || n >= kFermatSimdMaxValue ||
        n + xmax * xmax >= kFermatSimdMaxValue) {
      scalar_ops().fermat_sqrt_scan(n, xs, count, ys, is_square);
      return;
    }
  }
  ops.fermat_sqrt_scan(n, xs, count, ys, is_square);
}

}  // namespace modhyp::kernels

#include <cmath>
#include <cstdint>

#include "modhyp/kernels.hpp"

namespace modhyp::kernels {

namespace {

// Exact for the full 64-bit range; the float estimate is corrected with
// 128-bit comparisons.
inline std::uint64_t isqrt_u64(std::uint64_t v) {
  std::uint64_t s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (s > 0 && static_cast<unsigned __int128>(s) * s > v) --s;
  while (static_cast<unsigned __int128>(s + 1) * (s + 1) <= v) ++s;
  return s;
}

void square_mod_range_scalar(std::uint64_t c, std::uint64_t x0, std::size_t count,
                             std::uint64_t* out) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t x = (x0 + i) % c;
    out[i] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * x) % c);
  }
}

void fermat_sqrt_scan_scalar(std::uint64_t n, const std::uint64_t* xs,
                             std::size_t count, std::uint64_t* ys,
                             std::uint8_t* is_square) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t x = xs[i];
    const std::uint64_t v = n + x * x;
    const std::uint64_t s = isqrt_u64(v);
    ys[i] = s;
    is_square[i] = (s * s == v) ? 1 : 0;
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar", &square_mod_range_scalar, &fermat_sqrt_scan_scalar};
  return ops;
}

}  // namespace modhyp::kernels

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace modhyp::kernels {

// Data-parallel inner loops, provided as a scalar reference implementation
// and vector variants selected at runtime. The scalar kernels are exact over
// the full 64-bit range; the vector kernels carry tighter preconditions
// (documented per field) and the dispatching wrappers below fall back to
// scalar whenever an argument is out of range.

struct Ops {
  const char* name;

  // out[i] = (x0 + i)^2 mod c.
  // Vector variants require c <= kSquareModSimdMaxModulus and x0 + count <= c.
  void (*square_mod_range)(std::uint64_t c, std::uint64_t x0, std::size_t count,
                           std::uint64_t* out);

  // ys[i] = floor(sqrt(n + xs[i]^2)), is_square[i] = 1 iff n + xs[i]^2 is a
  // perfect square. Vector variants require n + xs[i]^2 < kFermatSimdMaxValue.
  void (*fermat_sqrt_scan)(std::uint64_t n, const std::uint64_t* xs,
                           std::size_t count, std::uint64_t* ys,
                           std::uint8_t* is_square);
};

inline constexpr std::uint64_t kSquareModSimdMaxModulus = std::uint64_t(1) << 25;
inline constexpr std::uint64_t kFermatSimdMaxValue = std::uint64_t(1) << 52;

const Ops& scalar_ops();

/// AVX2+FMA implementation, or nullptr when unsupported by the build or CPU.
const Ops* avx2_ops();

/// The implementation the wrappers use. Initialized once from cpuid; the
/// environment variable MODHYP_KERNEL=scalar|avx2 overrides the choice.
const Ops& active_ops();

/// Forces a specific implementation ("scalar", "avx2"). Returns false when
/// unavailable.
bool set_active_ops(std::string_view name);

// Dispatching wrappers. These enforce the vector preconditions and fall back
// to the scalar kernel when they do not hold.
void square_mod_range(std::uint64_t c, std::uint64_t x0, std::size_t count,
                      std::uint64_t* out);
void fermat_sqrt_scan(std::uint64_t n, const std::uint64_t* xs, std::size_t count,
                      std::uint64_t* ys, std::uint8_t* is_square);

}  // namespace modhyp::kernels

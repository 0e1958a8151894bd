// AVX2+FMA variants of the scan kernels. Values are staged in double lanes:
// every operand is kept below 2^52, where doubles represent integers exactly,
// so the only rounding to control is the reciprocal multiply (off-by-one in
// the quotient, fixed with one conditional add/subtract) and the vector
// sqrt (rounded root may sit one above the floor, fixed the same way).

#include <cstdint>

#include "modhyp/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace modhyp::kernels {

namespace {

// Exact u64 <-> double conversion for values < 2^52.
const __m256d kMagic = _mm256_set1_pd(4503599627370496.0);  // 2^52

inline __m256d u64_to_pd(__m256i v) {
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(
                           v, _mm256_castpd_si256(kMagic))),
                       kMagic);
}

inline __m256i pd_to_u64(__m256d d) {
  return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(d, kMagic)),
                          _mm256_castpd_si256(kMagic));
}

void square_mod_range_avx2(std::uint64_t c, std::uint64_t x0, std::size_t count,
                           std::uint64_t* out) {
  const double cd = static_cast<double>(c);
  const __m256d vc = _mm256_set1_pd(cd);
  const __m256d vinvc = _mm256_set1_pd(1.0 / cd);
  const __m256d vzero = _mm256_setzero_pd();

  std::size_t i = 0;
  __m256d x = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(x0)),
                            _mm256_set_pd(3.0, 2.0, 1.0, 0.0));
  const __m256d four = _mm256_set1_pd(4.0);
  for (; i + 4 <= count; i += 4) {
    const __m256d xx = _mm256_mul_pd(x, x);  // < 2^50, exact
    __m256d q = _mm256_floor_pd(_mm256_mul_pd(xx, vinvc));
    __m256d r = _mm256_fnmadd_pd(q, vc, xx);  // xx - q*c, exact
    // quotient may be off by one either way
    __m256d too_low = _mm256_cmp_pd(r, vzero, _CMP_LT_OQ);
    r = _mm256_add_pd(r, _mm256_and_pd(too_low, vc));
    __m256d too_high = _mm256_cmp_pd(r, vc, _CMP_GE_OQ);
    r = _mm256_sub_pd(r, _mm256_and_pd(too_high, vc));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), pd_to_u64(r));
    x = _mm256_add_pd(x, four);
  }
  for (; i < count; ++i) {
    const std::uint64_t xv = x0 + i;
    out[i] = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(xv) * xv) % c);
  }
}

void fermat_sqrt_scan_avx2(std::uint64_t n, const std::uint64_t* xs,
                           std::size_t count, std::uint64_t* ys,
                           std::uint8_t* is_square) {
  const __m256d vn = _mm256_set1_pd(static_cast<double>(n));
  const __m256d vone = _mm256_set1_pd(1.0);

  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256i xi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(xs + i));
    const __m256d x = u64_to_pd(xi);
    const __m256d v = _mm256_fmadd_pd(x, x, vn);  // n + x^2 < 2^52, exact
    __m256d s = _mm256_round_pd(_mm256_sqrt_pd(v),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    // rounded root can exceed the floor by one
    const __m256d over = _mm256_cmp_pd(_mm256_mul_pd(s, s), v, _CMP_GT_OQ);
    s = _mm256_sub_pd(s, _mm256_and_pd(over, vone));
    const __m256d exact = _mm256_cmp_pd(_mm256_mul_pd(s, s), v, _CMP_EQ_OQ);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(ys + i), pd_to_u64(s));
    const int mask = _mm256_movemask_pd(exact);
    is_square[i + 0] = (mask >> 0) & 1;
    is_square[i + 1] = (mask >> 1) & 1;
    is_square[i + 2] = (mask >> 2) & 1;
    is_square[i + 3] = (mask >> 3) & 1;
  }
  if (i < count) scalar_ops().fermat_sqrt_scan(n, xs + i, count - i, ys + i, is_square + i);
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{"avx2", &square_mod_range_avx2, &fermat_sqrt_scan_avx2};
  return &ops;
}

}  // namespace modhyp::kernels

#else

namespace modhyp::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace modhyp::kernels

#endif

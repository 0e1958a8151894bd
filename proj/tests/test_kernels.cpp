#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "modhyp/kernels.hpp"

using namespace modhyp::kernels;

namespace {

// Hits every variant the dispatcher knows about.
std::vector<const Ops*> all_variants() {
  std::vector<const Ops*> out{&scalar_ops()};
  if (const Ops* v = avx2_ops()) out.push_back(v);
  return out;
}

}  // namespace

TEST_CASE("square_mod_range variants agree with 128-bit arithmetic") {
  std::mt19937_64 rng(42);
  for (const Ops* ops : all_variants()) {
    CAPTURE(ops->name);
    for (std::uint64_t c : {3ull, 5ull, 255ull, 10007ull, 9999991ull,
                            (1ull << 25) - 1, (1ull << 25) - 3}) {
      for (int trial = 0; trial < 8; ++trial) {
        const std::size_t count = 1 + rng() % 600;
        const std::uint64_t x0 = c > count ? rng() % (c - count) : 0;
        std::vector<std::uint64_t> out(count);
        ops->square_mod_range(c, x0, count, out.data());
        for (std::size_t i = 0; i < count; ++i) {
          const std::uint64_t x = x0 + i;
          const std::uint64_t want = static_cast<std::uint64_t>(
              (static_cast<unsigned __int128>(x) * x) % c);
          REQUIRE(out[i] == want);
        }
      }
    }
  }
}

TEST_CASE("square_mod_range covers the boundary x near c") {
  for (const Ops* ops : all_variants()) {
    CAPTURE(ops->name);
    const std::uint64_t c = (1ull << 25) - 1;
    const std::size_t count = 128;
    std::vector<std::uint64_t> out(count);
    ops->square_mod_range(c, c - count, count, out.data());
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t x = c - count + i;
      CHECK(out[i] == static_cast<std::uint64_t>(
                          (static_cast<unsigned __int128>(x) * x) % c));
    }
  }
}

TEST_CASE("fermat_sqrt_scan variants: exact floors and square flags") {
  std::mt19937_64 rng(4242);
  for (const Ops* ops : all_variants()) {
    CAPTURE(ops->name);
    for (int trial = 0; trial < 40; ++trial) {
      const std::uint64_t n = rng() % (1ull << 40);
      const std::size_t count = 1 + rng() % 300;
      std::vector<std::uint64_t> xs(count), ys(count);
      std::vector<std::uint8_t> sq(count);
      for (auto& x : xs) x = rng() % (1ull << 20);
      // plant exact squares: x with n + x^2 = y^2 exists iff (y-x)(y+x) = n;
      // instead plant v-side squares by overwriting x so that n + x^2 is one
      for (std::size_t i = 0; i < count; i += 7) {
        const std::uint64_t y = (1ull << 20) + rng() % (1ull << 19);
        if (y * y > n) {
          const std::uint64_t want = y * y - n;
          // x = isqrt(want) only helps when want is a perfect square; try it
          std::uint64_t x = static_cast<std::uint64_t>(std::sqrt(double(want)));
          while (x * x > want) --x;
          if (x * x == want) xs[i] = x;
        }
      }
      ops->fermat_sqrt_scan(n, xs.data(), count, ys.data(), sq.data());
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t v = n + xs[i] * xs[i];
        const std::uint64_t y = ys[i];
        REQUIRE(y * y <= v);
        REQUIRE((y + 1) * (y + 1) > v);
        REQUIRE(sq[i] == (y * y == v ? 1 : 0));
      }
    }
  }
}

TEST_CASE("fermat_sqrt_scan flags known witnesses") {
  // 8051 + 7^2 = 90^2, 10403 + 1 = 102^2
  for (const Ops* ops : all_variants()) {
    CAPTURE(ops->name);
    const std::uint64_t xs[4] = {6, 7, 1, 2};
    std::uint64_t ys[4];
    std::uint8_t sq[4];
    ops->fermat_sqrt_scan(8051, xs, 2, ys, sq);
    CHECK(sq[0] == 0);
    CHECK(sq[1] == 1);
    CHECK(ys[1] == 90);
    ops->fermat_sqrt_scan(10403, xs + 2, 2, ys, sq);
    CHECK(sq[0] == 1);
    CHECK(ys[0] == 102);
  }
}

TEST_CASE("scalar fermat scan is exact near the 64-bit edge") {
  const std::uint64_t big = (1ull << 31) - 1;
  const std::uint64_t xs[3] = {big, big - 1, 123456789ull};
  std::uint64_t ys[3];
  std::uint8_t sq[3];
  scalar_ops().fermat_sqrt_scan(17, xs, 3, ys, sq);
  for (int i = 0; i < 3; ++i) {
    const unsigned __int128 v =
        17 + static_cast<unsigned __int128>(xs[i]) * xs[i];
    CHECK(static_cast<unsigned __int128>(ys[i]) * ys[i] <= v);
    CHECK(static_cast<unsigned __int128>(ys[i] + 1) * (ys[i] + 1) > v);
  }
}

TEST_CASE("dispatch wrappers fall back when preconditions fail") {
  // modulus above the SIMD limit: wrapper must still produce exact results
  const std::uint64_t c = (1ull << 30) + 7;
  std::vector<std::uint64_t> out(64);
  square_mod_range(c, c - 64, 64, out.data());
  for (std::size_t i = 0; i < 64; ++i) {
    const std::uint64_t x = c - 64 + i;
    CHECK(out[i] == static_cast<std::uint64_t>(
                        (static_cast<unsigned __int128>(x) * x) % c));
  }

  // value above 2^52: wrapper must fall back to the scalar kernel
  const std::uint64_t n = 1ull << 60;
  const std::uint64_t xs[2] = {1ull << 30, (1ull << 30) + 12345};
  std::uint64_t ys[2];
  std::uint8_t sq[2];
  fermat_sqrt_scan(n, xs, 2, ys, sq);
  for (int i = 0; i < 2; ++i) {
    const unsigned __int128 v = static_cast<unsigned __int128>(n) +
                                static_cast<unsigned __int128>(xs[i]) * xs[i];
    CHECK(static_cast<unsigned __int128>(ys[i]) * ys[i] <= v);
    CHECK(static_cast<unsigned __int128>(ys[i] + 1) * (ys[i] + 1) > v);
  }
}

TEST_CASE("kernel selection is switchable") {
  CHECK(set_active_ops("scalar"));
  CHECK(std::string(active_ops().name) == "scalar");
  if (avx2_ops()) {
    CHECK(set_active_ops("avx2"));
    CHECK(std::string(active_ops().name) == "avx2");
  } else {
    CHECK_FALSE(set_active_ops("avx2"));
  }
  CHECK_FALSE(set_active_ops("never-heard-of-it"));
  set_active_ops("scalar");
}

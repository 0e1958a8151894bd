#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "modhyp/ntheory.hpp"

using namespace modhyp;

namespace {

Int I(unsigned long v) { return Int(v); }

// Independent oracle: all roots of a mod m by squaring every residue.
std::vector<Int> roots_by_scan(std::uint64_t a, std::uint64_t m) {
  std::vector<Int> out;
  for (std::uint64_t x = 0; x < m; ++x)
    if ((static_cast<unsigned __int128>(x) * x) % m == a) out.push_back(I(x));
  return out;
}

// Independent oracle: the squares mod m by scan (no library calls).
std::set<std::uint64_t> squares_by_scan(std::uint64_t m) {
  std::set<std::uint64_t> s;
  for (std::uint64_t x = 0; x < m; ++x)
    s.insert(static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * x) % m));
  return s;
}

}  // namespace

TEST_CASE("legendre symbol examples") {
  CHECK(legendre_symbol(I(1), I(7)) == 1);
  CHECK(legendre_symbol(I(7), I(7)) == 0);
  CHECK(legendre_symbol(I(3), I(7)) == -1);  // squares mod 7 are {1,2,4}
  CHECK_THROWS_AS(legendre_symbol(I(3), I(8)), std::invalid_argument);
  CHECK_THROWS_AS(legendre_symbol(I(3), I(1)), std::invalid_argument);
}

TEST_CASE("jacobi symbol examples") {
  CHECK(jacobi_symbol(I(1), I(15)) == 1);
  CHECK(jacobi_symbol(I(2), I(15)) == 1);  // (2/3)(2/5) = (-1)(-1)
  CHECK(jacobi_symbol(I(3), I(9)) == 0);
  CHECK_THROWS_AS(jacobi_symbol(I(2), I(10)), std::invalid_argument);
}

TEST_CASE("jacobi agrees with legendre products over factored moduli") {
  std::mt19937_64 rng(1);
  for (std::uint64_t c = 3; c < 10000; c += 2) {
    // trial-division factorization, independent of the library
    std::vector<std::pair<std::uint64_t, unsigned>> factors;
    std::uint64_t rest = c;
    for (std::uint64_t d = 3; d * d <= rest; d += 2) {
      unsigned e = 0;
      while (rest % d == 0) {
        rest /= d;
        ++e;
      }
      if (e) factors.push_back({d, e});
    }
    if (rest > 1) factors.push_back({rest, 1});

    const unsigned samples = c < 200 ? static_cast<unsigned>(c) : 40;
    for (unsigned i = 0; i < samples; ++i) {
      const std::uint64_t a = c < 200 ? i : rng() % c;
      int expect = 1;
      for (const auto& [p, e] : factors) {
        const int l = legendre_symbol(I(a), I(p));
        for (unsigned j = 0; j < e; ++j) expect *= l;
      }
      CHECK(jacobi_symbol(I(a), I(c)) == expect);
    }
  }
}

TEST_CASE("sqrt mod prime examples") {
  CHECK(sqrt_mod_prime(I(0), I(7)) == I(0));
  CHECK(sqrt_mod_prime(I(2), I(7)) == I(3));  // 3^2 = 9 = 2, 4^2 = 16 = 2; smaller is 3
  CHECK_FALSE(sqrt_mod_prime(I(3), I(7)).has_value());
  CHECK_THROWS_AS(sqrt_mod_prime(I(2), I(9)), std::invalid_argument);
}

TEST_CASE("legendre and sqrt agree for p < 500; roots square back") {
  for (std::uint64_t p : odd_primes_up_to(499)) {
    const Int P = I(p);
    for (std::uint64_t a = 0; a < p; ++a) {
      const int chi = legendre_symbol(I(a), P);
      const auto r = sqrt_mod_prime(I(a), P);
      if (chi == -1) {
        CHECK_FALSE(r.has_value());
      } else {
        REQUIRE(r.has_value());
        CHECK((chi == 1) == (*r != 0));
        CHECK((*r) * (*r) % P == I(a));
        CHECK((P - *r) * (P - *r) % P == I(a));
        CHECK(*r <= P - *r);
      }
    }
  }
}

TEST_CASE("sqrt mod prime power examples") {
  CHECK(sqrt_mod_prime_power(I(0), I(3), 2) == std::vector<Int>{I(0), I(3), I(6)});
  CHECK(sqrt_mod_prime_power(I(4), I(3), 2) == std::vector<Int>{I(2), I(7)});
  CHECK(sqrt_mod_prime_power(I(3), I(3), 2).empty());  // odd 3-adic valuation
}

TEST_CASE("sqrt mod prime power matches exhaustive squaring") {
  // all odd prime powers with k >= 2 up to 10^4, plus small primes and a
  // sample of larger ones at k = 1
  std::vector<std::pair<std::uint64_t, unsigned>> moduli;
  for (std::uint64_t p : odd_primes_up_to(97)) {
    std::uint64_t q = p * p;
    unsigned k = 2;
    while (q <= 10000) {
      moduli.push_back({p, k});
      q *= p;
      ++k;
    }
  }
  for (std::uint64_t p : odd_primes_up_to(199)) moduli.push_back({p, 1});
  std::mt19937_64 rng(7);
  auto big = odd_primes_up_to(9999);
  for (int i = 0; i < 25; ++i) moduli.push_back({big[rng() % big.size()], 1});

  for (const auto& [p, k] : moduli) {
    std::uint64_t m = 1;
    for (unsigned j = 0; j < k; ++j) m *= p;
    // bucket the scan roots by the value of the square
    std::map<std::uint64_t, std::vector<Int>> by_square;
    for (std::uint64_t x = 0; x < m; ++x)
      by_square[(static_cast<unsigned __int128>(x) * x) % m].push_back(I(x));
    for (std::uint64_t a = 0; a < m; ++a) {
      auto got = sqrt_mod_prime_power(I(a), I(p), k);
      auto it = by_square.find(a);
      if (it == by_square.end()) {
        CHECK(got.empty());
      } else {
        CHECK(got == it->second);
      }
    }
  }
}

TEST_CASE("sqrt mod composite examples") {
  const auto c15 = FactoredModulus::from_value(I(15));
  CHECK(sqrt_mod_composite(I(1), c15) == std::vector<Int>{I(1), I(4), I(11), I(14)});
  CHECK(sqrt_mod_composite(I(4), c15) == std::vector<Int>{I(2), I(7), I(8), I(13)});
  CHECK(sqrt_mod_composite(I(7), c15).empty());
}

TEST_CASE("sqrt mod composite matches scan on assorted moduli") {
  for (std::uint64_t c : {45ull, 105ull, 225ull, 693ull, 1575ull}) {
    const auto fm = FactoredModulus::from_value(I(c));
    for (std::uint64_t a = 0; a < c; ++a)
      CHECK(sqrt_mod_composite(I(a), fm) == roots_by_scan(a, c));
  }
}

TEST_CASE("crt examples and exhaustive check") {
  CHECK(crt_pair(I(0), I(3), I(0), I(5)) == I(0));
  CHECK(crt_pair(I(1), I(3), I(4), I(5)) == I(4));
  CHECK(crt_pair(I(2), I(3), I(0), I(5)) == I(5));
  CHECK_THROWS_AS(crt_pair(I(1), I(6), I(1), I(4)), std::invalid_argument);

  for (std::uint64_t m1 = 2; m1 <= 100; ++m1) {
    for (std::uint64_t m2 = m1 + 1; m1 * m2 <= 10000; ++m2) {
      if (std::gcd(m1, m2) != 1) continue;
      const std::uint64_t step = 1 + (m1 * m2) / 50;
      for (std::uint64_t x = 0; x < m1 * m2; x += step)
        CHECK(crt_pair(I(x % m1), I(m1), I(x % m2), I(m2)) == I(x));
    }
  }
}

TEST_CASE("isqrt examples and random property to 2^256") {
  CHECK(isqrt(I(0)) == 0);
  CHECK(isqrt(I(8050)) == 89);
  CHECK(isqrt(I(8100)) == 90);
  CHECK_THROWS_AS(isqrt(Int(-1)), std::invalid_argument);

  gmp_randclass rng(gmp_randinit_default);
  rng.seed(12345ul);
  for (int i = 0; i < 2000; ++i) {
    const Int n = rng.get_z_bits(1 + i % 256);
    const Int r = isqrt(n);
    CHECK(r * r <= n);
    CHECK((r + 1) * (r + 1) > n);
  }
}

TEST_CASE("perfect square detection") {
  CHECK(perfect_square_root(I(8100)) == I(90));
  CHECK_FALSE(perfect_square_root(I(8099)).has_value());
  CHECK(perfect_square_root(I(0)) == I(0));

  gmp_randclass rng(gmp_randinit_default);
  rng.seed(99ul);
  for (int i = 0; i < 500; ++i) {
    const Int r = rng.get_z_bits(2 + i % 128);
    CHECK(perfect_square_root(r * r) == r);
    // r^2 + 1 is a square only for r = 0
    if (r > 0) CHECK_FALSE(perfect_square_root(r * r + 1).has_value());
  }
}

TEST_CASE("mod inverse examples") {
  CHECK(mod_inverse(I(1), I(7)) == 1);
  CHECK(mod_inverse(I(4), I(7)) == 2);
  CHECK_THROWS_AS(mod_inverse(I(5), I(15)), std::invalid_argument);
}

TEST_CASE("squares_mod examples") {
  CHECK(squares_mod(7) == std::vector<std::uint64_t>{0, 1, 2, 4});
  CHECK(squares_mod(9) == std::vector<std::uint64_t>{0, 1, 4, 7});
  CHECK(squares_mod(15) == std::vector<std::uint64_t>{0, 1, 4, 6, 9, 10});
  CHECK_THROWS_AS(squares_mod(8), std::invalid_argument);
}

TEST_CASE("squares_mod matches scan for odd moduli") {
  for (std::uint64_t c = 3; c < 600; c += 2) {
    const auto got = squares_mod(c);
    const auto want = squares_by_scan(c);
    CHECK(std::set<std::uint64_t>(got.begin(), got.end()) == want);
  }
}

TEST_CASE("factored modulus validation") {
  CHECK(FactoredModulus::from_value(I(45)).value() == 45);
  CHECK(FactoredModulus::from_value(I(45)).factors().size() == 2);
  CHECK_THROWS_AS(FactoredModulus::from_value(I(10)), std::invalid_argument);
  CHECK_THROWS_AS(FactoredModulus::from_factors({{I(4), 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FactoredModulus::from_factors({{I(9), 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FactoredModulus::from_factors({{I(7), 1}, {I(3), 1}}),
                  std::invalid_argument);
}

TEST_CASE("primorial split examples") {
  const auto s1 = odd_primorial_split(I(11026));
  CHECK(s1.m == 3);
  CHECK(s1.primes == std::vector<std::uint64_t>{3, 5, 7});
  CHECK(s1.r == 1);
  CHECK(s1.c_prime == 3);
  CHECK(s1.c_main == 35);

  CHECK_THROWS_AS(odd_primorial_split(I(8051)), std::invalid_argument);
  const auto s2 = odd_primorial_split(I(8051), 1, /*relaxed=*/true);
  CHECK(s2.m == 2);
  CHECK(s2.c_prime == 3);
  CHECK(s2.c_main == 5);

  const auto s3 = odd_primorial_split(Int("10000000000"));
  CHECK(s3.m == 5);
  CHECK(s3.primes == std::vector<std::uint64_t>{3, 5, 7, 11, 13});
  CHECK(s3.r == 2);
  CHECK(s3.c_prime == 15);
  CHECK(s3.c_main == 1001);
}

TEST_CASE("primorial split invariants on random inputs") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Int n = I(20000 + static_cast<unsigned long>(rng() % 100000000));
    PrimorialSplit s;
    try {
      s = odd_primorial_split(n);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const Int root = isqrt(n);
    CHECK(s.c_prime * s.c_main <= root);
    Int next_p = I(s.primes.back());
    do {
      next_p += 2;
    } while (!is_probable_prime(next_p));
    CHECK(s.c_prime * s.c_main * next_p > root);
    CHECK(s.r > 0);
    CHECK(s.r < s.m);
  }
}

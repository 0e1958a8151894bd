#include "modhyp/ntheory.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "modhyp/kernels.hpp"

namespace modhyp {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool is_odd(const Int& n) { return mpz_odd_p(n.get_mpz_t()) != 0; }

Int mod_nonneg(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int pow_ui(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

}  // namespace

Int isqrt(const Int& n) {
  require(n >= 0, "isqrt: negative input");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::optional<Int> perfect_square_root(const Int& n) {
  if (n < 0) return std::nullopt;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
  return isqrt(n);
}

Int mod_inverse(const Int& a, const Int& m) {
  require(m >= 2, "mod_inverse: modulus must be >= 2");
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::invalid_argument("mod_inverse: argument not invertible (gcd > 1)");
  return r;
}

Int crt_pair(const Int& r1, const Int& m1, const Int& r2, const Int& m2) {
  require(m1 >= 1 && m2 >= 1, "crt_pair: moduli must be positive");
  Int g;
  mpz_gcd(g.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
  require(g == 1, "crt_pair: moduli must be coprime");
  if (m1 == 1) return mod_nonneg(r2, m2);
  if (m2 == 1) return mod_nonneg(r1, m1);
  // x = r1 + m1 * ((r2 - r1) / m1 mod m2)
  Int t = mod_nonneg((r2 - r1) * mod_inverse(m1, m2), m2);
  return mod_nonneg(r1, m1) + m1 * t;
}

int legendre_symbol(const Int& a, const Int& p) {
  require(p > 1 && is_odd(p), "legendre_symbol: modulus must be an odd prime");
  Int r = mod_nonneg(a, p);
  if (r == 0) return 0;
  Int t;
  Int e = (p - 1) / 2;
  mpz_powm(t.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  if (t == 1) return 1;
  if (t == p - 1) return -1;
  throw std::invalid_argument("legendre_symbol: modulus is not prime");
}

int jacobi_symbol(const Int& a, const Int& c) {
  require(c >= 1 && is_odd(c), "jacobi_symbol: modulus must be odd and positive");
  return mpz_jacobi(a.get_mpz_t(), c.get_mpz_t());
}

bool is_probable_prime(const Int& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 32) > 0;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) -> std::uint64_t {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e) {
      if (e & 1) r = mulmod(r, a, m);
      a = mulmod(a, a, m);
      e >>= 1;
    }
    return r;
  };
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Sufficient witness set for the full 64-bit range.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::optional<Int> sqrt_mod_prime(const Int& a, const Int& p) {
  require(p > 1 && is_odd(p), "sqrt_mod_prime: modulus must be an odd prime");
  require(a >= 0 && a < p, "sqrt_mod_prime: residue out of range");
  if (a == 0) return Int(0);
  int ls = legendre_symbol(a, p);
  if (ls == -1) return std::nullopt;

  Int r;
  if (mpz_tstbit(p.get_mpz_t(), 1) != 0) {  // p = 3 (mod 4)
    Int e = (p + 1) / 4;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  } else {
    Int q = p - 1;
    unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
    Int z = 2;
    while (legendre_symbol(z, p) != -1) ++z;
    Int c, t;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    Int e = (q + 1) / 2;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    unsigned long m = s;
    while (t != 1) {
      Int tt = t;
      unsigned long i = 0;
      while (tt != 1) {
        tt = tt * tt % p;
        ++i;
      }
      Int b = c;
      for (unsigned long j = 0; j + i + 1 < m; ++j) b = b * b % p;
      m = i;
      c = b * b % p;
      t = t * c % p;
      r = r * b % p;
    }
  }
  Int other = p - r;
  return std::min(r, other);
}

std::vector<Int> sqrt_mod_prime_power(const Int& a, const Int& p, unsigned k) {
  require(p > 1 && is_odd(p), "sqrt_mod_prime_power: modulus must be an odd prime");
  require(k >= 1, "sqrt_mod_prime_power: exponent must be positive");
  Int q = pow_ui(p, k);
  require(a >= 0 && a < q, "sqrt_mod_prime_power: residue out of range");

  if (k == 1) {
    auto r = sqrt_mod_prime(a, p);
    if (!r) return {};
    if (*r == 0) return {Int(0)};
    return {*r, p - *r};
  }

  if (a == 0) {
    // x^2 = 0 (mod p^k) iff p^ceil(k/2) divides x.
    Int step = pow_ui(p, (k + 1) / 2);
    Int count = pow_ui(p, k / 2);
    std::vector<Int> roots;
    for (Int i = 0; i < count; ++i) roots.push_back(i * step);
    return roots;
  }

  Int unit = a;
  unsigned long v = mpz_remove(unit.get_mpz_t(), unit.get_mpz_t(), p.get_mpz_t());
  if (v % 2 != 0) return {};
  unsigned s = static_cast<unsigned>(v / 2);
  unsigned ku = k - static_cast<unsigned>(v);  // exponent left for the unit part

  auto r0 = sqrt_mod_prime(mod_nonneg(unit, p), p);
  if (!r0 || *r0 == 0) return {};  // unit part is a non-residue mod p

  // Hensel: refine the root of the unit part up to p^ku.
  Int r = *r0;
  Int pj = p;
  for (unsigned j = 1; j < ku; ++j) {
    pj *= p;
    Int corr = mod_nonneg((r * r - unit) * mod_inverse(2 * r, pj), pj);
    r = mod_nonneg(r - corr, pj);
  }
  Int qu = pow_ui(p, ku);
  Int ps = pow_ui(p, s);

  std::vector<Int> roots;
  const Int r_neg = qu - r;
  for (const Int& w : {r, r_neg}) {
    Int lift_count = ps;  // roots repeat mod p^{k-s} inside [0, p^k)
    for (Int t = 0; t < lift_count; ++t) roots.push_back(ps * (w + t * qu));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

FactoredModulus FactoredModulus::from_factors(std::vector<PrimePower> factors) {
  require(!factors.empty(), "FactoredModulus: empty factorization");
  FactoredModulus fm;
  Int value = 1;
  const Int* prev = nullptr;
  for (const auto& f : factors) {
    require(f.exponent >= 1, "FactoredModulus: exponent must be positive");
    require(f.prime > 2 && is_odd(f.prime), "FactoredModulus: primes must be odd");
    require(is_probable_prime(f.prime), "FactoredModulus: factor fails primality check");
    require(prev == nullptr || *prev < f.prime, "FactoredModulus: primes must be strictly increasing");
    prev = &f.prime;
    value *= pow_ui(f.prime, f.exponent);
  }
  fm.value_ = value;
  fm.factors_ = std::move(factors);
  return fm;
}

FactoredModulus FactoredModulus::from_value(const Int& value) {
  require(value >= 3 && is_odd(value), "FactoredModulus: value must be odd and >= 3");
  require(value <= Int(kEnumerationCap) * Int(kEnumerationCap),
          "FactoredModulus: value too large for trial division; supply factors");
  std::vector<PrimePower> factors;
  Int rest = value;
  Int d = 3;
  while (d * d <= rest) {
    if (mpz_divisible_p(rest.get_mpz_t(), d.get_mpz_t())) {
      unsigned e = 0;
      while (mpz_divisible_p(rest.get_mpz_t(), d.get_mpz_t())) {
        rest /= d;
        ++e;
      }
      factors.push_back({d, e});
    }
    d += 2;
  }
  if (rest > 1) factors.push_back({rest, 1});
  return from_factors(std::move(factors));
}

Int FactoredModulus::prime_power(std::size_t i) const {
  return pow_ui(factors_[i].prime, factors_[i].exponent);
}

std::vector<Int> sqrt_mod_composite(const Int& a, const FactoredModulus& c) {
  require(a >= 0 && a < c.value(), "sqrt_mod_composite: residue out of range");
  std::vector<Int> acc{Int(0)};
  Int acc_mod = 1;
  for (std::size_t i = 0; i < c.factors().size(); ++i) {
    const Int q = c.prime_power(i);
    auto part = sqrt_mod_prime_power(mod_nonneg(a, q), c.factors()[i].prime,
                                     c.factors()[i].exponent);
    if (part.empty()) return {};
    std::vector<Int> next;
    next.reserve(acc.size() * part.size());
    for (const Int& r : acc)
      for (const Int& w : part) next.push_back(crt_pair(r, acc_mod, w, q));
    acc = std::move(next);
    acc_mod *= q;
  }
  std::sort(acc.begin(), acc.end());
  return acc;
}

bool is_square_mod_prime_power(const Int& x, const Int& p, unsigned k) {
  require(p > 1 && is_odd(p), "is_square_mod_prime_power: modulus must be an odd prime");
  Int q = pow_ui(p, k);
  Int r = mod_nonneg(x, q);
  if (r == 0) return true;
  Int unit = r;
  unsigned long v = mpz_remove(unit.get_mpz_t(), unit.get_mpz_t(), p.get_mpz_t());
  if (v % 2 != 0) return false;
  return legendre_symbol(unit, p) == 1;
}

std::vector<bool> squares_mod_bitmap(std::uint64_t c) {
  require(c >= 3 && (c & 1) != 0, "squares_mod: modulus must be odd and >= 3");
  require(c <= kEnumerationCap, "squares_mod: modulus above enumeration cap");
  std::vector<bool> bits(c, false);
  // (c - x)^2 = x^2, so half the range suffices.
  const std::uint64_t half = c / 2;
  constexpr std::size_t kChunk = 4096;
  std::uint64_t buf[kChunk];
  std::uint64_t x = 0;
  while (x <= half) {
    std::size_t cnt = std::min<std::uint64_t>(kChunk, half - x + 1);
    kernels::square_mod_range(c, x, cnt, buf);
    for (std::size_t i = 0; i < cnt; ++i) bits[buf[i]] = true;
    x += cnt;
  }
  return bits;
}

std::vector<std::uint64_t> squares_mod(std::uint64_t c) {
  auto bits = squares_mod_bitmap(c);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < c; ++i)
    if (bits[i]) out.push_back(i);
  return out;
}

std::vector<std::uint64_t> odd_primes_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> primes;
  if (bound < 3) return primes;
  std::vector<bool> sieve(bound + 1, true);
  for (std::uint64_t i = 3; i * i <= bound; i += 2)
    if (sieve[i])
      for (std::uint64_t j = i * i; j <= bound; j += 2 * i) sieve[j] = false;
  for (std::uint64_t p = 3; p <= bound; p += 2)
    if (sieve[p]) primes.push_back(p);
  return primes;
}

namespace {

std::uint64_t next_odd_prime(std::uint64_t p) {
  for (std::uint64_t q = p + 2;; q += 2)
    if (is_prime_u64(q)) return q;
}

PrimorialSplit build_split(std::vector<std::uint64_t> primes, unsigned r) {
  const unsigned m = static_cast<unsigned>(primes.size());
  require(r > 0 && r < m, "primorial split: need 0 < r < m");
  PrimorialSplit split;
  split.m = m;
  split.r = r;
  split.c_prime = 1;
  split.c_main = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (i < r)
      split.c_prime *= primes[i];
    else
      split.c_main *= primes[i];
  }
  split.primes = std::move(primes);
  return split;
}

}  // namespace

PrimorialSplit odd_primorial_split(const Int& n, std::optional<unsigned> r_override,
                                   bool relaxed) {
  require(n >= 0, "odd_primorial_split: negative input");
  const Int root = isqrt(n);
  std::vector<std::uint64_t> primes;
  Int prod = 1;
  std::uint64_t p = 3;
  while (prod * p <= root) {
    prod *= p;
    primes.push_back(p);
    p = next_odd_prime(p);
  }
  const unsigned min_m = relaxed ? 2 : 3;
  if (primes.size() < min_m)
    throw std::invalid_argument(
        "odd_primorial_split: input too small for a split (use trial division"
        " or the relaxed mode)");
  const unsigned m = static_cast<unsigned>(primes.size());
  return build_split(std::move(primes), r_override.value_or(m / 2));
}

PrimorialSplit make_primorial_split(unsigned m, unsigned r) {
  require(m >= 2, "make_primorial_split: need at least two primes");
  std::vector<std::uint64_t> primes;
  std::uint64_t p = 3;
  for (unsigned i = 0; i < m; ++i) {
    primes.push_back(p);
    p = next_odd_prime(p);
  }
  return build_split(std::move(primes), r);
}

}  // namespace modhyp

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace modhyp {

using Int = mpz_class;
using Rat = mpq_class;

/// Largest modulus accepted by the exhaustive-enumeration routines
/// (squares_mod, hyperbola/target scans). Chosen so that x*x fits a
/// double exactly, which the vector kernels rely on.
inline constexpr std::uint64_t kEnumerationCap = std::uint64_t(1) << 25;

// ---------------------------------------------------------------------------
// Plain integer helpers (arbitrary precision throughout).
// ---------------------------------------------------------------------------

/// floor(sqrt(n)), exact for any size. Throws on negative input.
Int isqrt(const Int& n);

/// The root r with r*r == n, or nullopt when n is not a perfect square.
std::optional<Int> perfect_square_root(const Int& n);

/// Inverse of a modulo m. Throws when gcd(a, m) != 1.
Int mod_inverse(const Int& a, const Int& m);

/// Unique x in [0, m1*m2) with x = r1 (mod m1) and x = r2 (mod m2).
/// Throws when the moduli are not coprime.
Int crt_pair(const Int& r1, const Int& m1, const Int& r2, const Int& m2);

/// Legendre symbol (a/p) for an odd prime p, by Euler's criterion:
/// 0 when p | a, +1 for nonzero squares, -1 otherwise. A modulus that
/// fails the criterion (powm result not in {1, p-1}) is rejected.
int legendre_symbol(const Int& a, const Int& p);

/// Jacobi symbol (a/c) for odd positive c.
int jacobi_symbol(const Int& a, const Int& c);

bool is_probable_prime(const Int& n);

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// ---------------------------------------------------------------------------
// Modular square roots.
// ---------------------------------------------------------------------------

/// Smaller square root of a modulo an odd prime p (the other root is p - r),
/// or nullopt when a is a non-residue. a = 0 yields 0. Tonelli-Shanks with a
/// deterministic non-residue search (2, 3, 4, ...) so results are reproducible.
std::optional<Int> sqrt_mod_prime(const Int& a, const Int& p);

/// All x in [0, p^k) with x^2 = a (mod p^k), sorted. Handles p | a by
/// stripping the largest even power of p; a nonzero a with odd p-adic
/// valuation has no roots.
std::vector<Int> sqrt_mod_prime_power(const Int& a, const Int& p, unsigned k);

/// Odd modulus with a verified prime-power factorization. The factorization
/// is the precondition carrier for every formula that needs known factors.
class FactoredModulus {
 public:
  struct PrimePower {
    Int prime;
    unsigned exponent;
  };

  /// Builds from explicit factors: primes must be odd, probable primes,
  /// strictly increasing, exponents positive.
  static FactoredModulus from_factors(std::vector<PrimePower> factors);

  /// Factors an odd value by trial division (intended for small moduli).
  static FactoredModulus from_value(const Int& value);

  const Int& value() const { return value_; }
  const std::vector<PrimePower>& factors() const { return factors_; }
  Int prime_power(std::size_t i) const;

 private:
  FactoredModulus() = default;
  Int value_;
  std::vector<PrimePower> factors_;
};

/// All square roots of a modulo c, via CRT over the prime-power root lists.
std::vector<Int> sqrt_mod_composite(const Int& a, const FactoredModulus& c);

/// True when x is a square modulo p^k (0 counts as a square).
bool is_square_mod_prime_power(const Int& x, const Int& p, unsigned k);

// ---------------------------------------------------------------------------
// Enumeration-scale helpers (odd moduli up to kEnumerationCap).
// ---------------------------------------------------------------------------

/// The set { x^2 mod c : 0 <= x < c } for odd c >= 3, sorted ascending.
/// Includes 0. Materialized, so capped at kEnumerationCap.
std::vector<std::uint64_t> squares_mod(std::uint64_t c);

/// Same set as a membership bitmap of length c.
std::vector<bool> squares_mod_bitmap(std::uint64_t c);

/// Odd primes 3, 5, 7, ... up to and including bound.
std::vector<std::uint64_t> odd_primes_up_to(std::uint64_t bound);

// ---------------------------------------------------------------------------
// Primorial split for the factoring search.
// ---------------------------------------------------------------------------

/// Decomposition of the odd primorial 3*5*...*p_m into a small part
/// c_prime = p_1...p_r and a large part c_main = p_{r+1}...p_m, where m is
/// maximal with the full product <= isqrt(n).
struct PrimorialSplit {
  unsigned m = 0;
  unsigned r = 0;
  Int c_prime;
  Int c_main;
  std::vector<std::uint64_t> primes;

  Int modulus() const { return c_prime * c_main; }
};

/// Builds the split for n. Requires m >= 3 (n >= 105^2) unless relaxed, in
/// which case m >= 2 (n >= 225) is accepted. r defaults to floor(m/2).
PrimorialSplit odd_primorial_split(const Int& n,
                                   std::optional<unsigned> r_override = std::nullopt,
                                   bool relaxed = false);

/// Split over the first m odd primes with an explicit index, for studies
/// that vary m independently of n.
PrimorialSplit make_primorial_split(unsigned m, unsigned r);

}  // namespace modhyp

#pragma once

#include <cstdint>
#include <vector>

#include "modhyp/hyperbola.hpp"
#include "modhyp/ntheory.hpp"

namespace modhyp {

// A target for n modulo c is a pair (a, b) of squares mod c (0 included)
// with n + a = b (mod c); it is the mod-c shadow of a solution of
// n + x^2 = y^2. tau(n, c) counts them: closed form for odd primes, a
// lifting recursion for prime powers, multiplicative across coprime factors.

struct Target {
  Int a;
  Int b;
  Int modulus;

  friend bool operator==(const Target&, const Target&) = default;
};

/// Validating constructor: checks both components are squares mod c and
/// n + a = b (mod c).
Target make_target(const Int& a, const Int& b, const Int& c, const Int& n);

/// All targets for n modulo odd c, sorted by a. Direct scan; c is capped at
/// kEnumerationCap.
std::vector<Target> enumerate_targets(const Int& n, std::uint64_t c);

/// Same set composed per prime power through the CRT, for moduli whose
/// factorization is known. Each prime power must fit the enumeration cap.
std::vector<Target> enumerate_targets(const Int& n, const FactoredModulus& c);

/// |T(n, c)| by direct scan. The oracle: shares nothing with the formulas.
Int tau_brute(const Int& n, std::uint64_t c);

/// tau(n, p) for an odd prime p not dividing n:
/// (p-1)/4 + (1 + (n/p))/2 when p = 1 (mod 4), (p-3)/4 + 1 otherwise.
Int tau_prime(const Int& n, const Int& p);

/// s_p(n) = (1 + (n/p))/2 + (1 + (-n/p))/2, the number of elements of
/// {n, -n} that are squares mod p. Controls the zero-component targets.
int s_p(const Int& n, const Int& p);

/// tau(n, p^k) by the lifting recursion from tau(n, p); requires p odd prime
/// with p not dividing n. With s = s_p(n) and step k -> k+1:
///   k even: tau(n, p^{k+1}) = (tau(n, p^k) - s)*p + s*((p+1)/2)
///   k odd:  tau(n, p^{k+1}) = (tau(n, p^k) - s)*p + s
Int tau_prime_power(const Int& n, const Int& p, unsigned k);

/// tau(n, c) as the product of the prime-power values (CRT multiplicativity).
Int tau(const Int& n, const FactoredModulus& c);

/// All targets modulo p^{k+1} that reduce to t modulo p^k, sorted by a.
/// Counts: p when both components of t are nonzero; when a = 0 or b = 0,
/// (p+1)/2 for even k and exactly 1 for odd k.
std::vector<Target> lift_targets(const Int& n, const Int& p, unsigned k,
                                 const Target& t);

/// Number of pairs (x, y) in [0,p)^2 with n + x^2 = y^2 (mod p), by direct
/// scan. Equals p - 1 whenever p is an odd prime not dividing n.
std::uint64_t count_solutions_brute(const Int& n, std::uint64_t p);

/// The fundamental-region-to-target map
///   (x, y) -> (4^{-1} (x-y)^2, 4^{-1} (x+y)^2, p).
/// pt must lie on the hyperbola of n and inside the closed region.
Target gamma1(const HyperbolaPoint& pt, const Int& n);

/// Inverse map: with alpha the root of a below p/2 and u = 2*alpha, the
/// unique point of distance_class(n, p, u) inside the closed region.
HyperbolaPoint gamma2(const Target& t, const Int& n);

// ---------------------------------------------------------------------------
// Density of targets along odd primorials.
// ---------------------------------------------------------------------------

/// One row per odd prime bound B: the odd primorial c = prod of odd primes
/// <= B, the exact tau(n, c), the exact ratio tau/c, and its normalizations
/// by 4^omega / log B (omega = number of odd primes <= B) and by
/// 4^{omega+1} / log B (prime-counting convention including 2). The adjusted
/// columns apply the same treatment to prod (tau(n,p) - (1+(n/p))/2).
struct DensityRow {
  std::uint64_t B = 0;
  unsigned omega = 0;
  Int modulus;
  Int tau_value;
  Rat ratio;
  double normalized_4omega = 0.0;
  double normalized_4pi = 0.0;
  Int adjusted_product;
  Rat adjusted_ratio;
  double adjusted_normalized = 0.0;
  bool hypothesis_holds = false;  // (n/p) = -1 for every p <= B, p = 1 (mod 4)
  bool valid = false;             // false once some prime <= B divides n
};

std::vector<DensityRow> density_table(const Int& n, std::uint64_t b_max);

}  // namespace modhyp

#pragma once

#include <cstdint>
#include <vector>

#include "modhyp/ntheory.hpp"

namespace modhyp {

// The modular hyperbola H(n, c) = { (x, y) in [0,c)^2 : x*y = n (mod c) } and
// its distance geometry. Enumeration works for any odd modulus up to
// kEnumerationCap; the region/bijection operations assume a prime modulus.

struct HyperbolaPoint {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t modulus = 0;

  friend bool operator==(const HyperbolaPoint&, const HyperbolaPoint&) = default;
  friend auto operator<=>(const HyperbolaPoint&, const HyperbolaPoint&) = default;
};

/// Validating constructor: checks c odd >= 3, coordinates in range and
/// x*y = n (mod c).
HyperbolaPoint make_hyperbola_point(std::uint64_t x, std::uint64_t y,
                                    std::uint64_t c, const Int& n);

/// All points of H(n, c), sorted by x. Requires gcd(n, c) = 1; there are
/// exactly phi(c) of them.
std::vector<HyperbolaPoint> hyperbola_points(const Int& n, std::uint64_t c);

/// D(n, c) = sorted set of |x - y| over the points of the hyperbola.
std::vector<std::uint64_t> distance_set(const Int& n, std::uint64_t c);

/// |D(n, p)| by the closed form: (p-1)/4 + (1 + (n/p))/2 when p = 1 (mod 4),
/// (p-3)/4 + 1 when p = 3 (mod 4). Requires gcd(n, p) = 1.
std::uint64_t distance_set_size_formula(const Int& n, std::uint64_t p);

/// The points of the hyperbola at congruence distance u: both solution
/// families of Y(Y -+ u) = n (mod p), i.e. all (x, y) with x - y = +-u
/// (mod p). For u in the distance set this is exactly the set of points at
/// literal distance u; in general its size follows the discriminant
/// trichotomy of 4n + u^2.
struct DistanceClass {
  std::uint64_t u = 0;
  std::vector<HyperbolaPoint> points;
};

DistanceClass distance_class(const Int& n, std::uint64_t p, std::uint64_t u);

/// Membership in the closed fundamental region: 0 <= y <= min(x, c - x).
bool in_fundamental_region(const HyperbolaPoint& pt);

/// The hyperbola points inside the closed fundamental region, sorted by x.
/// Prime modulus; carries one representative per symmetry class, in
/// bijection with the distance set.
std::vector<HyperbolaPoint> fundamental_region(const Int& n, std::uint64_t p);

/// Orbit of pt under the two reflections (x,y) -> (y,x) and
/// (x,y) -> (c-x, c-y); between 1 and 4 points, sorted.
std::vector<HyperbolaPoint> symmetry_orbit(const HyperbolaPoint& pt);

/// The unique orbit member inside the fundamental region (prime modulus).
HyperbolaPoint canonical_representative(const HyperbolaPoint& pt);

}  // namespace modhyp

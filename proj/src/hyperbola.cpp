#include "modhyp/hyperbola.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace modhyp {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_enum_modulus(std::uint64_t c) {
  require(c >= 3 && (c & 1) != 0, "hyperbola: modulus must be odd and >= 3");
  require(c <= kEnumerationCap, "hyperbola: modulus above enumeration cap");
}

void check_odd_prime(std::uint64_t p) {
  require(p >= 3 && (p & 1) != 0 && is_prime_u64(p),
          "hyperbola: modulus must be an odd prime");
}

std::uint64_t reduce(const Int& n, std::uint64_t c) {
  Int r;
  mpz_mod_ui(r.get_mpz_t(), n.get_mpz_t(), c);
  return mpz_get_ui(r.get_mpz_t());
}

std::uint64_t require_coprime(const Int& n, std::uint64_t c) {
  std::uint64_t nr = reduce(n, c);
  require(std::gcd(nr, c) == 1, "hyperbola: n must be coprime to the modulus");
  return nr;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

// Inverse mod c for gcd(x, c) = 1, extended Euclid on signed words.
std::uint64_t invmod_u64(std::uint64_t x, std::uint64_t c) {
  std::int64_t a = static_cast<std::int64_t>(x % c), m = static_cast<std::int64_t>(c);
  std::int64_t u = 1, v = 0, b = m;
  while (b) {
    std::int64_t q = a / b;
    a -= q * b;
    std::swap(a, b);
    u -= q * v;
    std::swap(u, v);
  }
  std::int64_t r = u % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

}  // namespace

HyperbolaPoint make_hyperbola_point(std::uint64_t x, std::uint64_t y,
                                    std::uint64_t c, const Int& n) {
  check_enum_modulus(c);
  require(x < c && y < c, "hyperbola: coordinates out of range");
  require(mulmod(x, y, c) == reduce(n, c), "hyperbola: point not on the hyperbola");
  return HyperbolaPoint{x, y, c};
}

std::vector<HyperbolaPoint> hyperbola_points(const Int& n, std::uint64_t c) {
  check_enum_modulus(c);
  const std::uint64_t nr = require_coprime(n, c);
  std::vector<HyperbolaPoint> pts;
  for (std::uint64_t x = 1; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    pts.push_back({x, mulmod(nr, invmod_u64(x, c), c), c});
  }
  return pts;
}

std::vector<std::uint64_t> distance_set(const Int& n, std::uint64_t c) {
  check_enum_modulus(c);
  const std::uint64_t nr = require_coprime(n, c);
  std::vector<bool> seen(c, false);
  for (std::uint64_t x = 1; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    const std::uint64_t y = mulmod(nr, invmod_u64(x, c), c);
    seen[x > y ? x - y : y - x] = true;
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t u = 0; u < c; ++u)
    if (seen[u]) out.push_back(u);
  return out;
}

std::uint64_t distance_set_size_formula(const Int& n, std::uint64_t p) {
  check_odd_prime(p);
  require_coprime(n, p);
  if (p % 4 == 1) {
    const int chi = legendre_symbol(n, Int(static_cast<unsigned long>(p)));
    return (p - 1) / 4 + (1 + chi) / 2;
  }
  return (p - 3) / 4 + 1;
}

DistanceClass distance_class(const Int& n, std::uint64_t p, std::uint64_t u) {
  check_odd_prime(p);
  const std::uint64_t nr = require_coprime(n, p);
  require(u < p, "distance_class: distance out of range");

  DistanceClass cls;
  cls.u = u;
  const Int P(static_cast<unsigned long>(p));
  const std::uint64_t disc = (mulmod(u, u, p) + mulmod(4 % p, nr, p)) % p;
  auto root = sqrt_mod_prime(Int(static_cast<unsigned long>(disc)), P);
  if (!root) return cls;

  const std::uint64_t r = mpz_get_ui(root->get_mpz_t());
  const std::uint64_t inv2 = (p + 1) / 2;
  std::set<HyperbolaPoint> pts;
  // y(y - u) = n: y = (u +- r)/2, point (y - u, y)
  for (std::uint64_t rr : {r, p - r}) {
    const std::uint64_t y = mulmod((u + rr) % p, inv2, p);
    pts.insert({(y + p - u) % p, y, p});
  }
  // y(y + u) = n: y = (-u +- r)/2, point (y + u, y)
  for (std::uint64_t rr : {r, p - r}) {
    const std::uint64_t y = mulmod((p - u + rr) % p, inv2, p);
    pts.insert({(y + u) % p, y, p});
  }
  cls.points.assign(pts.begin(), pts.end());
  return cls;
}

bool in_fundamental_region(const HyperbolaPoint& pt) {
  return pt.y <= std::min(pt.x, pt.modulus - pt.x);
}

std::vector<HyperbolaPoint> fundamental_region(const Int& n, std::uint64_t p) {
  check_odd_prime(p);
  auto pts = hyperbola_points(n, p);
  std::erase_if(pts, [](const HyperbolaPoint& pt) { return !in_fundamental_region(pt); });
  return pts;
}

std::vector<HyperbolaPoint> symmetry_orbit(const HyperbolaPoint& pt) {
  const std::uint64_t c = pt.modulus;
  auto f1 = [&](HyperbolaPoint q) { return HyperbolaPoint{q.y, q.x, c}; };
  auto f2 = [&](HyperbolaPoint q) {
    return HyperbolaPoint{(c - q.x) % c, (c - q.y) % c, c};
  };
  std::set<HyperbolaPoint> orbit{pt, f1(pt), f2(pt), f1(f2(pt))};
  return {orbit.begin(), orbit.end()};
}

HyperbolaPoint canonical_representative(const HyperbolaPoint& pt) {
  check_odd_prime(pt.modulus);
  for (const auto& q : symmetry_orbit(pt))
    if (in_fundamental_region(q)) return q;
  throw std::logic_error("canonical_representative: no orbit member in the region");
}

}  // namespace modhyp

#include "modhyp/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace modhyp {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Int mod_nonneg(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

std::uint64_t reduce_u64(const Int& n, std::uint64_t c) {
  Int r;
  mpz_mod_ui(r.get_mpz_t(), n.get_mpz_t(), c);
  return mpz_get_ui(r.get_mpz_t());
}

void check_enum_modulus(std::uint64_t c) {
  require(c >= 3 && (c & 1) != 0, "targets: modulus must be odd and >= 3");
  require(c <= kEnumerationCap, "targets: modulus above enumeration cap");
}

void check_odd_prime(const Int& p) {
  require(p >= 3 && mpz_odd_p(p.get_mpz_t()) != 0 && is_probable_prime(p),
          "targets: modulus must be an odd prime");
}

void check_coprime(const Int& n, const Int& m, const char* msg) {
  Int g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  require(g == 1, msg);
}

bool is_square_mod(const Int& x, const FactoredModulus& c) {
  for (std::size_t i = 0; i < c.factors().size(); ++i)
    if (!is_square_mod_prime_power(mod_nonneg(x, c.prime_power(i)),
                                   c.factors()[i].prime, c.factors()[i].exponent))
      return false;
  return true;
}

std::uint64_t to_u64(const Int& v, const char* msg) {
  require(v >= 0 && mpz_fits_ulong_p(v.get_mpz_t()), msg);
  return mpz_get_ui(v.get_mpz_t());
}

}  // namespace

Target make_target(const Int& a, const Int& b, const Int& c, const Int& n) {
  require(c >= 3 && mpz_odd_p(c.get_mpz_t()) != 0, "targets: modulus must be odd and >= 3");
  require(a >= 0 && a < c && b >= 0 && b < c, "targets: components out of range");
  require(mod_nonneg(n + a - b, c) == 0, "targets: n + a != b (mod c)");
  const auto fm = FactoredModulus::from_value(c);
  require(is_square_mod(a, fm) && is_square_mod(b, fm),
          "targets: components must be squares mod c");
  return Target{a, b, c};
}

std::vector<Target> enumerate_targets(const Int& n, std::uint64_t c) {
  check_enum_modulus(c);
  const std::uint64_t nr = reduce_u64(n, c);
  const auto bits = squares_mod_bitmap(c);
  std::vector<Target> out;
  for (std::uint64_t a = 0; a < c; ++a) {
    if (!bits[a]) continue;
    std::uint64_t b = nr + a;
    if (b >= c) b -= c;
    if (bits[b]) out.push_back({Int(static_cast<unsigned long>(a)),
                                Int(static_cast<unsigned long>(b)),
                                Int(static_cast<unsigned long>(c))});
  }
  return out;
}

std::vector<Target> enumerate_targets(const Int& n, const FactoredModulus& c) {
  // CRT composition: a target mod c is exactly a CRT tuple of per-prime-power
  // targets, with b forced by b = n + a (mod c).
  std::vector<Int> a_parts{Int(0)};
  Int acc_mod = 1;
  for (std::size_t i = 0; i < c.factors().size(); ++i) {
    const Int q = c.prime_power(i);
    const std::uint64_t q64 = to_u64(q, "targets: prime power above enumeration cap");
    auto part = enumerate_targets(n, q64);
    std::vector<Int> next;
    next.reserve(a_parts.size() * part.size());
    for (const Int& a : a_parts)
      for (const Target& t : part) next.push_back(crt_pair(a, acc_mod, t.a, q));
    a_parts = std::move(next);
    acc_mod *= q;
    require(a_parts.size() <= (std::size_t(1) << 26),
            "targets: composed target list too large");
  }
  std::sort(a_parts.begin(), a_parts.end());
  std::vector<Target> out;
  out.reserve(a_parts.size());
  const Int nr = mod_nonneg(n, c.value());
  for (const Int& a : a_parts) out.push_back({a, mod_nonneg(nr + a, c.value()), c.value()});
  return out;
}

Int tau_brute(const Int& n, std::uint64_t c) {
  check_enum_modulus(c);
  const std::uint64_t nr = reduce_u64(n, c);
  const auto bits = squares_mod_bitmap(c);
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < c; ++a) {
    if (!bits[a]) continue;
    std::uint64_t b = nr + a;
    if (b >= c) b -= c;
    if (bits[b]) ++count;
  }
  return Int(static_cast<unsigned long>(count));
}

Int tau_prime(const Int& n, const Int& p) {
  check_odd_prime(p);
  check_coprime(n, p, "tau_prime: n must be coprime to p");
  if (mpz_tstbit(p.get_mpz_t(), 1) == 0) {  // p = 1 (mod 4)
    const int chi = legendre_symbol(n, p);
    return (p - 1) / 4 + (1 + chi) / 2;
  }
  return (p - 3) / 4 + 1;
}

int s_p(const Int& n, const Int& p) {
  check_odd_prime(p);
  check_coprime(n, p, "s_p: n must be coprime to p");
  const int a = legendre_symbol(n, p);
  const int b = legendre_symbol(-n, p);
  return (1 + a) / 2 + (1 + b) / 2;
}

Int tau_prime_power(const Int& n, const Int& p, unsigned k) {
  require(k >= 1, "tau_prime_power: exponent must be positive");
  Int t = tau_prime(n, p);  // validates p and coprimality
  const Int s(s_p(n, p));
  const Int half_plus_one = (p + 1) / 2;  // |(Z_p)^2| + 1 with zero excluded from the squares
  for (unsigned j = 1; j < k; ++j) {
    if (j % 2 == 0)
      t = (t - s) * p + s * half_plus_one;
    else
      t = (t - s) * p + s;
  }
  return t;
}

Int tau(const Int& n, const FactoredModulus& c) {
  check_coprime(n, c.value(), "tau: n must be coprime to the modulus");
  Int prod = 1;
  for (const auto& f : c.factors()) prod *= tau_prime_power(n, f.prime, f.exponent);
  return prod;
}

std::vector<Target> lift_targets(const Int& n, const Int& p, unsigned k,
                                 const Target& t) {
  check_odd_prime(p);
  check_coprime(n, p, "lift_targets: n must be coprime to p");
  Int q;
  mpz_pow_ui(q.get_mpz_t(), p.get_mpz_t(), k);
  require(t.modulus == q, "lift_targets: target modulus is not p^k");
  require(t.a >= 0 && t.a < q && t.b >= 0 && t.b < q,
          "lift_targets: target components out of range");
  require(mod_nonneg(n + t.a - t.b, q) == 0, "lift_targets: input is not a target");
  require(is_square_mod_prime_power(t.a, p, k) && is_square_mod_prime_power(t.b, p, k),
          "lift_targets: input components are not squares");

  const Int q1 = q * p;
  std::vector<Target> out;
  for (Int step = 0; step < p; ++step) {
    const Int a1 = t.a + step * q;
    const Int b1 = mod_nonneg(n + a1, q1);
    if (is_square_mod_prime_power(a1, p, k + 1) &&
        is_square_mod_prime_power(b1, p, k + 1))
      out.push_back({a1, b1, q1});
  }
  return out;  // already sorted by a
}

std::uint64_t count_solutions_brute(const Int& n, std::uint64_t p) {
  require(p >= 3 && (p & 1) != 0, "count_solutions_brute: modulus must be odd");
  require(p <= 100000, "count_solutions_brute: modulus too large for the scan");
  const std::uint64_t nr = reduce_u64(n, p);
  require(std::gcd(nr, p) == 1, "count_solutions_brute: n must be coprime to p");
  // residue histogram of squares, then pair counts
  std::vector<std::uint32_t> sq_count(p, 0);
  for (std::uint64_t x = 0; x < p; ++x) ++sq_count[(x * x) % p];
  std::uint64_t total = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t v = (nr + (x * x) % p) % p;
    total += sq_count[v];
  }
  return total;
}

Target gamma1(const HyperbolaPoint& pt, const Int& n) {
  const std::uint64_t p = pt.modulus;
  require(p >= 3 && (p & 1) != 0 && is_prime_u64(p),
          "gamma1: modulus must be an odd prime");
  const std::uint64_t nr = reduce_u64(n, p);
  auto mul = [&](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  };
  require(mul(pt.x, pt.y) == nr, "gamma1: point not on the hyperbola");
  require(in_fundamental_region(pt), "gamma1: point outside the fundamental region");
  const Int P(static_cast<unsigned long>(p));
  const std::uint64_t inv4 =
      mpz_get_ui(mod_inverse(Int(4), P).get_mpz_t());
  const std::uint64_t d = (pt.x + p - pt.y) % p;
  const std::uint64_t s = (pt.x + pt.y) % p;
  const Int a(static_cast<unsigned long>(mul(inv4, mul(d, d))));
  const Int b(static_cast<unsigned long>(mul(inv4, mul(s, s))));
  return Target{a, b, P};
}

HyperbolaPoint gamma2(const Target& t, const Int& n) {
  check_odd_prime(t.modulus);
  check_coprime(n, t.modulus, "gamma2: n must be coprime to p");
  const std::uint64_t p = to_u64(t.modulus, "gamma2: modulus too large");
  require(t.a >= 0 && t.a < t.modulus && t.b >= 0 && t.b < t.modulus &&
              mod_nonneg(n + t.a - t.b, t.modulus) == 0,
          "gamma2: argument is not a target for n");
  auto alpha = sqrt_mod_prime(t.a, t.modulus);
  require(alpha.has_value(), "gamma2: a-component is not a square");
  const std::uint64_t u = (2 * mpz_get_ui(alpha->get_mpz_t())) % p;
  const auto cls = distance_class(n, p, u);
  for (const auto& pt : cls.points)
    if (in_fundamental_region(pt)) return pt;
  throw std::invalid_argument("gamma2: argument is not a target for n");
}

std::vector<DensityRow> density_table(const Int& n, std::uint64_t b_max) {
  std::vector<DensityRow> rows;
  Int modulus = 1;
  Int tau_acc = 1;
  Int adj_acc = 1;
  bool valid = true;
  bool hypothesis = true;
  unsigned omega = 0;
  for (std::uint64_t p : odd_primes_up_to(b_max)) {
    const Int P(static_cast<unsigned long>(p));
    ++omega;
    modulus *= P;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) valid = false;
    if (valid) {
      const int chi = legendre_symbol(n, P);
      tau_acc *= tau_prime(n, P);
      adj_acc *= tau_prime(n, P) - (1 + chi) / 2;
      if (p % 4 == 1 && chi != -1) hypothesis = false;
    }

    DensityRow row;
    row.B = p;
    row.omega = omega;
    row.modulus = modulus;
    row.valid = valid;
    row.hypothesis_holds = valid && hypothesis;
    if (valid) {
      row.tau_value = tau_acc;
      row.ratio = Rat(tau_acc, modulus);
      row.ratio.canonicalize();
      row.adjusted_product = adj_acc;
      row.adjusted_ratio = Rat(adj_acc, modulus);
      row.adjusted_ratio.canonicalize();
      Int four_omega;
      mpz_ui_pow_ui(four_omega.get_mpz_t(), 4, omega);
      const double logB = std::log(static_cast<double>(p));
      Rat scaled = row.ratio * Rat(four_omega);
      row.normalized_4omega = scaled.get_d() / logB;
      row.normalized_4pi = scaled.get_d() * 4.0 / logB;
      Rat adj_scaled = row.adjusted_ratio * Rat(four_omega);
      row.adjusted_normalized = adj_scaled.get_d() / logB;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace modhyp

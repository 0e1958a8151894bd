#include "modhyp/selftest.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "modhyp/factorizer.hpp"
#include "modhyp/hyperbola.hpp"
#include "modhyp/targets.hpp"

namespace modhyp {

namespace {

struct Reporter {
  std::ostream& out;
  bool all_ok = true;

  void report(const std::string& name, bool ok, const std::string& detail = "") {
    out << (ok ? "ok" : "FAIL") << ": " << name;
    if (!detail.empty()) out << " (" << detail << ")";
    out << '\n';
    all_ok = all_ok && ok;
  }
};

bool tau_closed_form(std::uint64_t p_bound) {
  for (std::uint64_t p : odd_primes_up_to(p_bound)) {
    const Int P(static_cast<unsigned long>(p));
    for (std::uint64_t n = 1; n < p; ++n)
      if (tau_prime(Int(static_cast<unsigned long>(n)), P) !=
          tau_brute(Int(static_cast<unsigned long>(n)), p))
        return false;
  }
  return true;
}

bool distance_counts(std::uint64_t p_bound) {
  for (std::uint64_t p : odd_primes_up_to(p_bound)) {
    for (std::uint64_t n = 1; n < p; ++n) {
      const Int N(static_cast<unsigned long>(n));
      if (distance_set(N, p).size() != distance_set_size_formula(N, p)) return false;
    }
  }
  return true;
}

bool prime_power_recursion(std::uint64_t pk_bound) {
  for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull}) {
    const Int P(static_cast<unsigned long>(p));
    std::uint64_t q = p;
    for (unsigned k = 1; q <= pk_bound; ++k, q *= p) {
      for (std::uint64_t n = 1; n < p; ++n) {
        const Int N(static_cast<unsigned long>(n));
        if (tau_prime_power(N, P, k) != tau_brute(N, q)) return false;
      }
    }
  }
  return true;
}

bool multiplicativity(unsigned pairs, std::uint64_t product_bound, std::mt19937_64& rng) {
  unsigned done = 0;
  while (done < pairs) {
    std::uint64_t s = 3 + 2 * (rng() % 80);
    std::uint64_t t = 3 + 2 * (rng() % 120);
    if (std::gcd(s, t) != 1 || s * t >= product_bound) continue;
    std::uint64_t n = 1 + rng() % (s * t);
    if (std::gcd(n, s * t) != 1) continue;
    const Int N(static_cast<unsigned long>(n));
    if (tau_brute(N, s * t) != tau_brute(N, s) * tau_brute(N, t)) return false;
    ++done;
  }
  return true;
}

bool solution_counts(std::uint64_t p_bound, std::mt19937_64& rng) {
  for (std::uint64_t p : odd_primes_up_to(p_bound)) {
    for (int i = 0; i < 3; ++i) {
      std::uint64_t n = 1 + rng() % (p - 1);
      if (count_solutions_brute(Int(static_cast<unsigned long>(n)), p) != p - 1)
        return false;
    }
  }
  return true;
}

bool gamma_round_trip(std::uint64_t p_bound) {
  for (std::uint64_t p : odd_primes_up_to(p_bound)) {
    for (std::uint64_t n = 1; n < p; ++n) {
      const Int N(static_cast<unsigned long>(n));
      const auto region = fundamental_region(N, p);
      for (const auto& pt : region) {
        if (gamma2(gamma1(pt, N), N) != pt) return false;
      }
      const auto targets = enumerate_targets(N, p);
      if (targets.size() != region.size()) return false;
      for (const auto& t : targets) {
        const Target back = gamma1(gamma2(t, N), N);
        if (back != t) return false;
      }
    }
  }
  return true;
}

bool class_trichotomy(std::uint64_t p_bound) {
  for (std::uint64_t p : odd_primes_up_to(p_bound)) {
    const Int P(static_cast<unsigned long>(p));
    for (std::uint64_t n = 1; n < p; ++n) {
      const Int N(static_cast<unsigned long>(n));
      for (std::uint64_t u = 0; u < p; ++u) {
        const std::size_t size = distance_class(N, p, u).points.size();
        std::size_t expect;
        if (u == 0) {
          expect = legendre_symbol(N, P) == 1 ? 2 : 0;
        } else {
          const std::uint64_t disc = (u * u + 4 * n) % p;
          const int chi = legendre_symbol(Int(static_cast<unsigned long>(disc)), P);
          expect = chi == 1 ? 4 : (chi == 0 ? 2 : 0);
        }
        if (size != expect) return false;
      }
    }
  }
  return true;
}

bool density_sweep(std::uint64_t b_max, double bound) {
  const auto rows = density_table(Int(1), b_max);
  if (rows.empty()) return false;
  Rat prev_ratio;
  bool first = true;
  for (const auto& row : rows) {
    if (!row.valid) return false;
    if (row.normalized_4omega > bound) return false;
    if (!first && row.ratio >= prev_ratio) return false;
    prev_ratio = row.ratio;
    first = false;
  }
  return true;
}

}  // namespace

bool run_selftest(std::ostream& diag) {
  Reporter rep{diag};
  std::mt19937_64 rng(0x5eed5eedULL);

  rep.report("tau closed form vs scan (p < 100)", tau_closed_form(99));
  rep.report("distance-set size vs formula (p < 100)", distance_counts(99));
  rep.report("prime-power recursion vs scan (p^k <= 3000)", prime_power_recursion(3000));
  rep.report("multiplicativity on 100 random coprime pairs (st < 10^4)",
             multiplicativity(100, 10000, rng));
  rep.report("solution count n + x^2 = y^2 equals p - 1 (p < 100)",
             solution_counts(99, rng));
  rep.report("gamma round trip (p < 100)", gamma_round_trip(99));
  rep.report("distance-class trichotomy (p < 100)", class_trichotomy(99));
  rep.report("density sweep bounded and decreasing (B <= 31)", density_sweep(31, 10.0));

  diag << (rep.all_ok ? "selftest: all checks passed" : "selftest: FAILURES present")
       << '\n';
  return rep.all_ok;
}

}  // namespace modhyp

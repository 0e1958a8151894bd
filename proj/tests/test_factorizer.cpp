#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "modhyp/factorizer.hpp"
#include "modhyp/targets.hpp"

using namespace modhyp;

namespace {

Int I(unsigned long v) { return Int(v); }

FactorizationConfig relaxed_cfg() {
  FactorizationConfig cfg;
  cfg.relaxed_split = true;
  return cfg;
}

}  // namespace

TEST_CASE("residue candidates for 8051 under the 3/5 split") {
  const auto split = odd_primorial_split(I(8051), 1, /*relaxed=*/true);
  REQUIRE(split.c_prime == 3);
  REQUIRE(split.c_main == 5);
  const auto rc = residue_candidates(I(8051), split);
  CHECK(rc.targets_main == 2);   // (0,1) and (4,0) mod 5
  CHECK(rc.targets_prime == 1);  // (1,0) mod 3
  const std::vector<Int> expect{I(2), I(5), I(7), I(8), I(10), I(13)};
  CHECK(rc.residues == expect);
  // the witness x* = 7 appears
  CHECK(std::find(rc.residues.begin(), rc.residues.end(), I(7)) != rc.residues.end());
}

TEST_CASE("residue candidates signal a shared prime") {
  const auto split = odd_primorial_split(I(99015), std::nullopt, true);  // 3 | 99015
  const auto rc = residue_candidates(I(99015), split);
  REQUIRE(rc.trivial_factor.has_value());
  CHECK(*rc.trivial_factor == 3);
}

TEST_CASE("residue candidates are closed under negation mod M") {
  const auto split = odd_primorial_split(Int("10000000000"));
  const Int M = split.modulus();
  const auto rc = residue_candidates(Int("10000000019"), split);
  std::set<Int> set(rc.residues.begin(), rc.residues.end());
  for (const Int& r : rc.residues) {
    const Int neg = (M - r) % M;
    CHECK(set.count(neg) == 1);
  }
}

TEST_CASE("fermat_check examples") {
  const auto hit = fermat_check(I(8051), I(7));
  REQUIRE(hit.has_value());
  CHECK(hit->first == 90);
  CHECK(hit->second == 83);
  CHECK_FALSE(fermat_check(I(8051), I(6)).has_value());
  const auto sq = fermat_check(I(49), I(0));
  REQUIRE(sq.has_value());
  CHECK(sq->first == 7);
  CHECK(sq->second == 7);
}

TEST_CASE("factor examples") {
  const auto r1 = factor(I(8051), relaxed_cfg());
  REQUIRE(r1.status == FactorStatus::found);
  CHECK(r1.factors == std::make_pair(I(83), I(97)));
  CHECK(r1.witness_x == I(7));
  CHECK(r1.witness_y == I(90));

  const auto r2 = factor(I(10403), relaxed_cfg());
  REQUIRE(r2.status == FactorStatus::found);
  CHECK(r2.factors == std::make_pair(I(101), I(103)));
  CHECK(r2.witness_x == I(1));
  CHECK(r2.witness_y == I(102));

  const auto r3 = factor(Int("1000036000099"));
  REQUIRE(r3.status == FactorStatus::found);
  CHECK(r3.factors == std::make_pair(Int("1000003"), Int("1000033")));
  CHECK(r3.witness_x == I(15));
  CHECK(r3.witness_y == Int("1000018"));

  CHECK_THROWS_AS(factor(I(8052)), std::invalid_argument);
  CHECK_THROWS_AS(factor(I(8051)), std::invalid_argument);  // needs relaxed split
}

TEST_CASE("factor shortcuts") {
  // perfect square
  const auto sq = factor(I(9409));  // 97^2
  REQUIRE(sq.status == FactorStatus::found);
  CHECK(sq.factors == std::make_pair(I(97), I(97)));
  // shared prime with the split modulus
  const auto tri = factor(I(3 * 41 * 107));
  REQUIRE(tri.status == FactorStatus::found);
  CHECK(tri.factors->first == 3);
}

TEST_CASE("naive fermat examples") {
  const auto r1 = naive_fermat(I(8051), I(100));
  REQUIRE(r1.status == FactorStatus::found);
  CHECK(r1.factors == std::make_pair(I(83), I(97)));
  CHECK(*r1.stats.naive_fermat_steps == 8);  // x = 0..7

  const auto r2 = naive_fermat(I(10403), I(100));
  CHECK(*r2.stats.naive_fermat_steps == 2);

  const auto r3 = naive_fermat(I(15), I(100));
  REQUIRE(r3.status == FactorStatus::found);
  CHECK(r3.factors == std::make_pair(I(3), I(5)));
  CHECK(r3.witness_x == I(1));
  CHECK(r3.witness_y == I(4));

  const auto r4 = naive_fermat(I(8053), I(10));  // prime; window too small
  CHECK(r4.status == FactorStatus::aborted);
  CHECK(*r4.stats.naive_fermat_steps == 10);
}

TEST_CASE("soundness on random balanced semiprimes") {
  std::mt19937_64 rng(2024);
  gmp_randclass grng(gmp_randinit_default);
  grng.seed(2024ul);
  for (int i = 0; i < 15; ++i) {
    Int p = grng.get_z_range(900000) + 100000;
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    Int q = p + static_cast<unsigned long>(rng() % 500);
    mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
    const Int n = p * q;
    if (p == q) continue;

    const auto res = factor(n);
    REQUIRE(res.status == FactorStatus::found);
    REQUIRE(res.factors.has_value());
    const auto [g, h] = *res.factors;
    CHECK(g * h == n);
    CHECK(g > 1);
    CHECK(g < n);
    CHECK(std::set<Int>({g, h}) == std::set<Int>({p, q}));
    if (res.witness_x) {
      // exact witness: n + x^2 = y^2 and both gcd routes recover a factor
      const Int x = *res.witness_x, y = *res.witness_y;
      CHECK(n + x * x == y * y);
      Int g1, g2;
      mpz_gcd(g1.get_mpz_t(), Int(y - x).get_mpz_t(), n.get_mpz_t());
      mpz_gcd(g2.get_mpz_t(), Int(y + x).get_mpz_t(), n.get_mpz_t());
      CHECK((g1 == g || g2 == g || g1 == h || g2 == h));
    }
  }
}

TEST_CASE("pruning consistency: the witness residue is enumerated") {
  std::mt19937_64 rng(77);
  gmp_randclass grng(gmp_randinit_default);
  grng.seed(77ul);
  for (int i = 0; i < 10; ++i) {
    Int p = grng.get_z_range(90000) + 10000;
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    Int q = p + static_cast<unsigned long>(rng() % 200);
    mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
    if (p == q) continue;
    const Int n = p * q;
    const Int x_star = (q - p) / 2;

    const auto split = odd_primorial_split(n);
    const auto rc = residue_candidates(n, split);
    const Int M = split.modulus();
    const Int rho = x_star % M;
    CHECK(std::binary_search(rc.residues.begin(), rc.residues.end(), rho));

    // x*^2 mod c_main must be the a-component of some enumerated target
    const Int a_main = (x_star * x_star) % split.c_main;
    bool found = false;
    for (const auto& t : enumerate_targets(n, FactoredModulus::from_value(split.c_main)))
      if (t.a == a_main) found = true;
    CHECK(found);
  }
}

TEST_CASE("candidate density decreases as more primes enter the split") {
  const Int n("1000036000099");
  double prev = 2.0;
  for (unsigned m = 3; m <= 6; ++m) {
    const auto split = make_primorial_split(m, m / 2);
    const auto rc = residue_candidates(n, split);
    const double density = Rat(Int(static_cast<unsigned long>(rc.residues.size())),
                               split.modulus())
                               .get_d();
    CHECK(density < prev);
    prev = density;
  }
}

TEST_CASE("batch and per-candidate modes agree; threads agree with single") {
  std::mt19937_64 rng(31337);
  gmp_randclass grng(gmp_randinit_default);
  grng.seed(31337ul);
  for (int i = 0; i < 8; ++i) {
    Int p = grng.get_z_range(400000) + 20000;
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    Int q = p + static_cast<unsigned long>(rng() % 300);
    mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
    if (p == q) continue;
    const Int n = p * q;

    FactorizationConfig per;
    per.batch_gcd = false;
    FactorizationConfig batch;
    batch.batch_gcd = true;
    batch.batch_size = 8;
    FactorizationConfig mt;
    mt.threads = 4;

    const auto a = factor(n, per);
    const auto b = factor(n, batch);
    const auto c = factor(n, mt);
    REQUIRE(a.status == FactorStatus::found);
    REQUIRE(b.status == FactorStatus::found);
    REQUIRE(c.status == FactorStatus::found);
    CHECK(a.factors == b.factors);
    CHECK(a.factors == c.factors);
    // exact witnesses agree between per-candidate and threaded scans
    if (a.witness_x && c.witness_x) CHECK(*a.witness_x == *c.witness_x);
  }
}

TEST_CASE("candidate limit aborts") {
  FactorizationConfig cfg;
  cfg.relaxed_split = true;
  cfg.candidate_limit = 2;
  const auto res = factor(I(8051), cfg);
  CHECK(res.status == FactorStatus::aborted);
  CHECK(res.stats.candidates_tested <= 2);
}

TEST_CASE("exhausted on a prime input") {
  // the only Fermat witness of a prime is x = (n-1)/2, far beyond the window
  FactorizationConfig cfg;
  cfg.relaxed_split = true;
  cfg.batch_gcd = false;
  const auto res = factor(I(7919), cfg);
  CHECK(res.status == FactorStatus::exhausted);
  CHECK_FALSE(res.factors.has_value());
}

TEST_CASE("stats invariant: tested bounded by residues times window") {
  FactorizationConfig cfg;
  cfg.relaxed_split = true;
  cfg.batch_gcd = false;
  const auto res = factor(I(8051), cfg);
  const auto split = odd_primorial_split(I(8051), std::nullopt, true);
  const Int k_window = (isqrt(I(8051)) + split.modulus() - 1) / split.modulus();
  CHECK(res.stats.candidates_tested <=
        res.stats.roots_total * (2 * k_window + 1));
}

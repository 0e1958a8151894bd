#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "modhyp/ntheory.hpp"

namespace modhyp {

// Target-guided Fermat factorization. A witness x with n + x^2 = y^2 yields
// the factors gcd(y -+ x, n). Candidate x values are pruned modulo the odd
// primorial M = c_prime * c_main: x^2 mod each part must be the a-component
// of a target, so x mod M must be a CRT combination of the square roots of
// target a-components. The scan walks x = rho + M*k over the combined
// residues rho for k = 0..k_window; negative witnesses are covered by the
// complementary residues M - rho, which are present because roots come in
// +- pairs.

struct FactorizationConfig {
  std::optional<unsigned> r_override;
  std::optional<Int> k_window;        // default: ceil(isqrt(n) / M)
  bool relaxed_split = false;         // allow m = 2 (n as small as 225)
  bool batch_gcd = true;              // accumulate prod(floor(sqrt(n+x^2)) - x) mod n
  unsigned batch_size = 64;
  Int candidate_limit = Int(1) << 26; // abort guard on tested candidates
  unsigned threads = 1;
  bool collect_baseline = false;      // also run naive_fermat for the stats
};

enum class FactorStatus { found, exhausted, aborted };

struct CandidateStats {
  Int targets_main;       // |T(n, c_main)|
  Int targets_prime;      // |T(n, c_prime)|
  Int roots_total;        // |combined residue set|
  Int candidates_tested;  // x values consumed up to and including the hit
  std::optional<Int> naive_fermat_steps;
};

struct FactorResult {
  FactorStatus status = FactorStatus::exhausted;
  std::optional<std::pair<Int, Int>> factors;  // (g, n/g) with g <= n/g
  std::optional<Int> witness_x;                // present iff n + x^2 = y^2 exactly
  std::optional<Int> witness_y;
  CandidateStats stats;
};

struct ResidueCandidates {
  std::vector<Int> residues;  // sorted, deduplicated, modulo M
  Int targets_main;
  Int targets_prime;
  std::optional<Int> trivial_factor;  // set when some prime of M divides n
};

/// The CRT-combined square roots of target a-components mod both split
/// parts. Complete: any witness x <= isqrt(n) satisfies x mod M in the set.
ResidueCandidates residue_candidates(const Int& n, const PrimorialSplit& split);

/// If n + x^2 is a perfect square y^2, returns (y, gcd(y - x, n)).
std::optional<std::pair<Int, Int>> fermat_check(const Int& n, const Int& x);

/// The guided search. n must be odd and >= 9; callers screen primes.
FactorResult factor(const Int& n, const FactorizationConfig& cfg = {});

/// Baseline: x = 0, 1, 2, ... until n + x^2 is a square or the limit hits.
FactorResult naive_fermat(const Int& n, const Int& step_limit);

}  // namespace modhyp

#include "modhyp/factorizer.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "modhyp/kernels.hpp"
#include "modhyp/targets.hpp"

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

Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

FactoredModulus part_modulus(const PrimorialSplit& split, bool main_part) {
  std::vector<FactoredModulus::PrimePower> factors;
  for (unsigned i = 0; i < split.m; ++i) {
    const bool in_main = i >= split.r;
    if (in_main == main_part)
      factors.push_back({Int(static_cast<unsigned long>(split.primes[i])), 1});
  }
  return FactoredModulus::from_factors(std::move(factors));
}

std::pair<Int, Int> ordered_factors(const Int& g, const Int& n) {
  Int h = n / g;
  return g <= h ? std::make_pair(g, h) : std::make_pair(h, g);
}

// A candidate x whose floor square root y of n + x^2 was computed; exact
// witnesses carry is_square.
struct Hit {
  Int k;
  std::size_t rho_index = 0;
  Int x;
  Int y;
  Int g;
  bool exact = false;
};

class CandidateScan {
 public:
  CandidateScan(const Int& n, const Int& modulus, std::vector<Int> residues,
                const FactorizationConfig& cfg)
      : n_(n), modulus_(modulus), residues_(std::move(residues)), cfg_(cfg) {
    // The u64 lane is usable when every candidate value n + x^2 stays below
    // 2^63; the kernels then pick SIMD or scalar per block themselves.
    const Int k_max = cfg.k_window ? *cfg.k_window : (isqrt(n) + modulus_ - 1) / modulus_;
    k_max_ = k_max;
    const Int x_max = modulus_ * (k_max_ + 1);
    fast_ = mpz_fits_ulong_p(n_.get_mpz_t()) &&
            (n_ + x_max * x_max) < (Int(1) << 63);
  }

  // Scans rows k = 0..k_max; returns the hit with the smallest (k, rho) that
  // produced a nontrivial factor, or nothing.
  std::optional<Hit> run(Int& candidates_tested, FactorStatus& status) {
    status = FactorStatus::exhausted;
    if (residues_.empty()) return std::nullopt;
    const unsigned threads = std::max(1u, cfg_.threads);
    if (threads == 1 || !fast_) {
      return run_single(candidates_tested, status);
    }
    return run_parallel(threads, candidates_tested, status);
  }

 private:
  std::optional<Hit> scan_row_fast(std::uint64_t k, std::uint64_t n64,
                                   std::uint64_t m64, Int& tested,
                                   bool& limit_hit) {
    const std::uint64_t base = m64 * k;
    const std::size_t total = residues64_.size();
    std::uint64_t xs[kBlock], ys[kBlock];
    std::uint8_t sq[kBlock];
    Int batch_acc = 1;
    unsigned batch_fill = 0;
    std::vector<std::pair<std::size_t, std::uint64_t>> batch;  // (rho index, y)

    auto flush_batch = [&]() -> std::optional<Hit> {
      if (batch_fill == 0) return std::nullopt;
      Int g = gcd(batch_acc, n_);
      batch_acc = 1;
      batch_fill = 0;
      if (g == 1) {
        batch.clear();
        return std::nullopt;
      }
      // Attribute the factor to the earliest contributing candidate.
      for (const auto& [idx, y] : batch) {
        const std::uint64_t x = base + residues64_[idx];
        Int gi = gcd(Int(static_cast<unsigned long>(y - x)), n_);
        if (gi > 1 && gi < n_) {
          batch.clear();
          Hit h;
          h.k = Int(static_cast<unsigned long>(k));
          h.rho_index = idx;
          h.x = Int(static_cast<unsigned long>(x));
          h.y = Int(static_cast<unsigned long>(y));
          h.g = gi;
          h.exact = false;
          return h;
        }
      }
      batch.clear();
      return std::nullopt;
    };

    for (std::size_t off = 0; off < total; off += kBlock) {
      const std::size_t cnt = std::min(kBlock, total - off);
      for (std::size_t i = 0; i < cnt; ++i) xs[i] = base + residues64_[off + i];
      kernels::fermat_sqrt_scan(n64, xs, cnt, ys, sq);
      for (std::size_t i = 0; i < cnt; ++i) {
        if (tested >= cfg_.candidate_limit) {
          limit_hit = true;
          return std::nullopt;
        }
        ++tested;
        const std::uint64_t x = xs[i];
        const std::uint64_t y = ys[i];
        if (sq[i]) {
          if (auto h = try_witness(k, off + i, x, y)) return h;
          continue;
        }
        if (cfg_.batch_gcd && y > x) {
          batch_acc = mod_nonneg(batch_acc * Int(static_cast<unsigned long>(y - x)), n_);
          batch.push_back({off + i, y});
          if (++batch_fill >= cfg_.batch_size) {
            if (auto h = flush_batch()) return h;
          }
        }
      }
    }
    return flush_batch();
  }

  std::optional<Hit> try_witness(std::uint64_t k, std::size_t idx, std::uint64_t x,
                                 std::uint64_t y) {
    const Int X(static_cast<unsigned long>(x)), Y(static_cast<unsigned long>(y));
    Int g = gcd(Y - X, n_);
    if (g == 1 || g == n_) g = gcd(Y + X, n_);
    if (g == 1 || g == n_) return std::nullopt;
    Hit h;
    h.k = Int(static_cast<unsigned long>(k));
    h.rho_index = idx;
    h.x = X;
    h.y = Y;
    h.g = g;
    h.exact = true;
    return h;
  }

  std::optional<Hit> scan_row_mpz(const Int& k, Int& tested, bool& limit_hit) {
    const Int base = modulus_ * k;
    Int batch_acc = 1;
    unsigned batch_fill = 0;
    std::vector<std::pair<std::size_t, Int>> batch;

    auto flush_batch = [&]() -> std::optional<Hit> {
      if (batch_fill == 0) return std::nullopt;
      Int g = gcd(batch_acc, n_);
      batch_acc = 1;
      batch_fill = 0;
      if (g == 1) {
        batch.clear();
        return std::nullopt;
      }
      for (const auto& [idx, y] : batch) {
        const Int x = base + residues_[idx];
        Int gi = gcd(y - x, n_);
        if (gi > 1 && gi < n_) {
          batch.clear();
          Hit h{k, idx, x, y, gi, false};
          return h;
        }
      }
      batch.clear();
      return std::nullopt;
    };

    for (std::size_t i = 0; i < residues_.size(); ++i) {
      if (tested >= cfg_.candidate_limit) {
        limit_hit = true;
        return std::nullopt;
      }
      ++tested;
      const Int x = base + residues_[i];
      const Int v = n_ + x * x;
      Int y = isqrt(v);
      if (y * y == v) {
        Int g = gcd(y - x, n_);
        if (g == 1 || g == n_) g = gcd(y + x, n_);
        if (g > 1 && g < n_) {
          Hit h{k, i, x, y, g, true};
          return h;
        }
        continue;
      }
      if (cfg_.batch_gcd && y > x) {
        batch_acc = mod_nonneg(batch_acc * (y - x), n_);
        batch.push_back({i, y});
        if (++batch_fill >= cfg_.batch_size) {
          if (auto h = flush_batch()) return h;
        }
      }
    }
    return flush_batch();
  }

  std::optional<Hit> run_single(Int& tested, FactorStatus& status) {
    bool limit_hit = false;
    if (fast_) {
      materialize_u64();
      const std::uint64_t n64 = mpz_get_ui(n_.get_mpz_t());
      const std::uint64_t m64 = mpz_get_ui(modulus_.get_mpz_t());
      const std::uint64_t kmax = mpz_get_ui(k_max_.get_mpz_t());
      for (std::uint64_t k = 0; k <= kmax; ++k) {
        if (auto h = scan_row_fast(k, n64, m64, tested, limit_hit)) {
          status = FactorStatus::found;
          return h;
        }
        if (limit_hit) {
          status = FactorStatus::aborted;
          return std::nullopt;
        }
      }
    } else {
      for (Int k = 0; k <= k_max_; ++k) {
        if (auto h = scan_row_mpz(k, tested, limit_hit)) {
          status = FactorStatus::found;
          return h;
        }
        if (limit_hit) {
          status = FactorStatus::aborted;
          return std::nullopt;
        }
      }
    }
    status = FactorStatus::exhausted;
    return std::nullopt;
  }

  // Rows are drawn from an atomic counter; a worker that finds a hit records
  // it and the others stop drawing rows beyond the smallest hit row, so the
  // reported witness is the same one a sequential scan would return.
  std::optional<Hit> run_parallel(unsigned threads, Int& tested_out,
                                  FactorStatus& status) {
    materialize_u64();
    const std::uint64_t n64 = mpz_get_ui(n_.get_mpz_t());
    const std::uint64_t m64 = mpz_get_ui(modulus_.get_mpz_t());
    const std::uint64_t kmax = mpz_get_ui(k_max_.get_mpz_t());

    std::atomic<std::uint64_t> next_row{0};
    std::atomic<std::uint64_t> best_row{std::uint64_t(-1)};
    std::atomic<bool> aborted{false};
    std::mutex mu;
    std::vector<Hit> hits;
    std::vector<Int> tested_per(threads, Int(0));

    auto worker = [&](unsigned wid) {
      for (;;) {
        const std::uint64_t k = next_row.fetch_add(1, std::memory_order_relaxed);
        if (k > kmax || k > best_row.load(std::memory_order_acquire) ||
            aborted.load(std::memory_order_relaxed))
          return;
        bool limit_hit = false;
        if (auto h = scan_row_fast(k, n64, m64, tested_per[wid], limit_hit)) {
          std::uint64_t prev = best_row.load(std::memory_order_acquire);
          while (k < prev &&
                 !best_row.compare_exchange_weak(prev, k, std::memory_order_acq_rel)) {
          }
          std::lock_guard<std::mutex> lock(mu);
          hits.push_back(std::move(*h));
        }
        if (limit_hit) aborted.store(true, std::memory_order_relaxed);
      }
    };

    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    }

    for (const Int& t : tested_per) tested_out += t;
    if (!hits.empty()) {
      auto best = std::min_element(hits.begin(), hits.end(),
                                   [](const Hit& a, const Hit& b) {
                                     if (a.k != b.k) return a.k < b.k;
                                     return a.rho_index < b.rho_index;
                                   });
      status = FactorStatus::found;
      return *best;
    }
    status = aborted ? FactorStatus::aborted : FactorStatus::exhausted;
    return std::nullopt;
  }

  void materialize_u64() {
    if (!residues64_.empty()) return;
    residues64_.reserve(residues_.size());
    for (const Int& r : residues_) residues64_.push_back(mpz_get_ui(r.get_mpz_t()));
  }

  static constexpr std::size_t kBlock = 1024;

  const Int n_;
  const Int modulus_;
  std::vector<Int> residues_;
  std::vector<std::uint64_t> residues64_;
  FactorizationConfig cfg_;
  Int k_max_;
  bool fast_ = false;
};

}  // namespace

ResidueCandidates residue_candidates(const Int& n, const PrimorialSplit& split) {
  ResidueCandidates rc;
  for (std::uint64_t p : split.primes) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      rc.trivial_factor = Int(static_cast<unsigned long>(p));
      return rc;
    }
  }
  const auto fm_main = part_modulus(split, true);
  const auto fm_prime = part_modulus(split, false);
  const auto targets_main = enumerate_targets(n, fm_main);
  const auto targets_prime = enumerate_targets(n, fm_prime);
  rc.targets_main = Int(static_cast<unsigned long>(targets_main.size()));
  rc.targets_prime = Int(static_cast<unsigned long>(targets_prime.size()));

  std::vector<Int> roots_main, roots_prime;
  for (const Target& t : targets_main) {
    auto roots = sqrt_mod_composite(t.a, fm_main);
    roots_main.insert(roots_main.end(), roots.begin(), roots.end());
  }
  for (const Target& t : targets_prime) {
    auto roots = sqrt_mod_composite(t.a, fm_prime);
    roots_prime.insert(roots_prime.end(), roots.begin(), roots.end());
  }

  rc.residues.reserve(roots_main.size() * roots_prime.size());
  const Int inv_main = mod_inverse(split.c_main, split.c_prime);
  for (const Int& rm : roots_main) {
    for (const Int& rp : roots_prime) {
      // CRT: x = rm + c_main * ((rp - rm) / c_main mod c_prime)
      Int t = mod_nonneg((rp - rm) * inv_main, split.c_prime);
      rc.residues.push_back(rm + split.c_main * t);
    }
  }
  std::sort(rc.residues.begin(), rc.residues.end());
  rc.residues.erase(std::unique(rc.residues.begin(), rc.residues.end()),
                    rc.residues.end());
  return rc;
}

std::optional<std::pair<Int, Int>> fermat_check(const Int& n, const Int& x) {
  const Int v = n + x * x;
  auto y = perfect_square_root(v);
  if (!y) return std::nullopt;
  return std::make_pair(*y, gcd(*y - x, n));
}

FactorResult factor(const Int& n, const FactorizationConfig& cfg) {
  require(n >= 9, "factor: n must be >= 9");
  require(mpz_odd_p(n.get_mpz_t()) != 0, "factor: n must be odd");
  require(cfg.candidate_limit >= 1, "factor: candidate_limit must be >= 1");
  require(!cfg.k_window || *cfg.k_window >= 1, "factor: k_window must be >= 1");

  FactorResult res;
  if (auto r = perfect_square_root(n)) {
    res.status = FactorStatus::found;
    res.factors = std::make_pair(*r, *r);
    res.witness_x = Int(0);
    res.witness_y = *r;
    return res;
  }

  const auto split = odd_primorial_split(n, cfg.r_override, cfg.relaxed_split);
  auto rc = residue_candidates(n, split);
  if (rc.trivial_factor) {
    res.status = FactorStatus::found;
    res.factors = ordered_factors(*rc.trivial_factor, n);
    return res;
  }
  res.stats.targets_main = rc.targets_main;
  res.stats.targets_prime = rc.targets_prime;
  res.stats.roots_total = Int(static_cast<unsigned long>(rc.residues.size()));

  CandidateScan scan(n, split.modulus(), std::move(rc.residues), cfg);
  FactorStatus status = FactorStatus::exhausted;
  res.stats.candidates_tested = 0;
  auto hit = scan.run(res.stats.candidates_tested, status);
  res.status = status;
  if (hit) {
    res.factors = ordered_factors(hit->g, n);
    if (hit->exact) {
      res.witness_x = hit->x;
      res.witness_y = hit->y;
    }
  }

  if (cfg.collect_baseline) {
    const Int limit = isqrt(n) + 1;
    auto base = naive_fermat(n, limit);
    res.stats.naive_fermat_steps = base.stats.naive_fermat_steps;
  }
  return res;
}

FactorResult naive_fermat(const Int& n, const Int& step_limit) {
  require(n >= 9, "naive_fermat: n must be >= 9");
  require(mpz_odd_p(n.get_mpz_t()) != 0, "naive_fermat: n must be odd");
  require(step_limit >= 1, "naive_fermat: step_limit must be >= 1");

  FactorResult res;
  res.stats.candidates_tested = 0;

  const bool fast = mpz_fits_ulong_p(n.get_mpz_t()) &&
                    (n + (step_limit + 1) * (step_limit + 1)) < (Int(1) << 63);
  Int steps = 0;
  auto finish = [&](const Int& x, const Int& y) {
    Int g = gcd(y - x, n);
    if (g == 1 || g == n) g = gcd(y + x, n);
    if (g > 1 && g < n) {
      res.status = FactorStatus::found;
      res.factors = ordered_factors(g, n);
      res.witness_x = x;
      res.witness_y = y;
      return true;
    }
    return false;
  };

  if (fast) {
    const std::uint64_t n64 = mpz_get_ui(n.get_mpz_t());
    const std::uint64_t limit = mpz_get_ui(step_limit.get_mpz_t());
    constexpr std::size_t kBlock = 1024;
    std::uint64_t xs[kBlock], ys[kBlock];
    std::uint8_t sq[kBlock];
    for (std::uint64_t x0 = 0; x0 < limit;) {
      const std::size_t cnt = std::min<std::uint64_t>(kBlock, limit - x0);
      for (std::size_t i = 0; i < cnt; ++i) xs[i] = x0 + i;
      kernels::fermat_sqrt_scan(n64, xs, cnt, ys, sq);
      for (std::size_t i = 0; i < cnt; ++i) {
        ++steps;
        if (sq[i] && finish(Int(static_cast<unsigned long>(xs[i])),
                            Int(static_cast<unsigned long>(ys[i])))) {
          res.stats.candidates_tested = steps;
          res.stats.naive_fermat_steps = steps;
          return res;
        }
      }
      x0 += cnt;
    }
  } else {
    for (Int x = 0; x < step_limit; ++x) {
      ++steps;
      const Int v = n + x * x;
      auto y = perfect_square_root(v);
      if (y && finish(x, *y)) {
        res.stats.candidates_tested = steps;
        res.stats.naive_fermat_steps = steps;
        return res;
      }
    }
  }
  res.status = FactorStatus::aborted;
  res.stats.candidates_tested = steps;
  res.stats.naive_fermat_steps = steps;
  return res;
}

}  // namespace modhyp

// Command-line front end: tau counts, target/hyperbola enumeration, distance
// sets, density sweeps and the guided Fermat factorizer. One JSON record per
// invocation on stdout (JSON lines); diagnostics on stderr.
//
// Exit codes: 0 success / factor found, 1 usage or computation error,
// 2 factor not found (exhausted or aborted).

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modhyp/factorizer.hpp"
#include "modhyp/hyperbola.hpp"
#include "modhyp/selftest.hpp"
#include "modhyp/targets.hpp"

using json = nlohmann::json;
using namespace modhyp;

namespace {

std::string dec(const Int& v) { return v.get_str(); }
std::string dec(std::uint64_t v) { return std::to_string(v); }
std::string dec(const Rat& v) { return v.get_str(); }

Int parse_int(const std::string& s, const char* what) {
  try {
    return Int(s, 10);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": not a decimal integer: " + s);
  }
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  Int v = parse_int(s, what);
  if (v < 0 || !mpz_fits_ulong_p(v.get_mpz_t()))
    throw std::invalid_argument(std::string(what) + ": out of range: " + s);
  return mpz_get_ui(v.get_mpz_t());
}

// Factorization strings look like "3^2*7*11"; primes ascending.
bool looks_like_factorization(const std::string& s) {
  return s.find('*') != std::string::npos || s.find('^') != std::string::npos;
}

FactoredModulus parse_factored(const std::string& s) {
  std::vector<FactoredModulus::PrimePower> factors;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t star = s.find('*', pos);
    const std::string term = s.substr(pos, star == std::string::npos ? star : star - pos);
    if (term.empty()) throw std::invalid_argument("modulus: empty factor in " + s);
    const std::size_t caret = term.find('^');
    const Int prime = parse_int(term.substr(0, caret), "modulus factor");
    unsigned exponent = 1;
    if (caret != std::string::npos) {
      const std::uint64_t e = parse_u64(term.substr(caret + 1), "modulus exponent");
      if (e == 0 || e > 64) throw std::invalid_argument("modulus: exponent out of range");
      exponent = static_cast<unsigned>(e);
    }
    factors.push_back({prime, exponent});
    if (star == std::string::npos) break;
    pos = star + 1;
  }
  return FactoredModulus::from_factors(std::move(factors));
}

struct Emitter {
  std::string command;
  json inputs = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(json payload) const {
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    json record{{"command", command},
                {"inputs", inputs},
                {"payload", std::move(payload)},
                {"timingMs", ms}};
    std::cout << record.dump() << '\n';
  }
};

json target_pair(const Target& t) { return json::array({dec(t.a), dec(t.b)}); }
json point_pair(const HyperbolaPoint& p) { return json::array({dec(p.x), dec(p.y)}); }

// --- subcommand payload builders ---------------------------------------

int cmd_tau(const std::string& n_str, const std::string& mod_str, bool check) {
  Emitter em{"tau"};
  em.inputs = {{"n", n_str}, {"mod", mod_str}, {"check", check}};
  const Int n = parse_int(n_str, "n");

  json payload;
  std::optional<Int> scan_value, formula_value;
  if (looks_like_factorization(mod_str)) {
    const auto fm = parse_factored(mod_str);
    formula_value = tau(n, fm);
    payload["mode"] = "formula";
    payload["tau"] = dec(*formula_value);
    if (check && fm.value() <= Int(static_cast<unsigned long>(kEnumerationCap))) {
      scan_value = tau_brute(n, mpz_get_ui(fm.value().get_mpz_t()));
      payload["scan"] = dec(*scan_value);
      payload["agree"] = (*scan_value == *formula_value);
    }
  } else {
    const std::uint64_t c = parse_u64(mod_str, "mod");
    scan_value = tau_brute(n, c);
    payload["mode"] = "scan";
    payload["tau"] = dec(*scan_value);
    if (check) {
      const auto fm = FactoredModulus::from_value(Int(static_cast<unsigned long>(c)));
      formula_value = tau(n, fm);
      payload["formula"] = dec(*formula_value);
      payload["agree"] = (*scan_value == *formula_value);
    }
  }
  em.emit(payload);
  return 0;
}

int cmd_targets(const std::string& n_str, const std::string& mod_str,
                std::uint64_t limit) {
  Emitter em{"targets"};
  em.inputs = {{"n", n_str}, {"mod", mod_str}, {"limit", limit}};
  const Int n = parse_int(n_str, "n");
  std::vector<Target> list;
  if (looks_like_factorization(mod_str))
    list = enumerate_targets(n, parse_factored(mod_str));
  else
    list = enumerate_targets(n, parse_u64(mod_str, "mod"));

  json arr = json::array();
  const std::size_t shown = std::min<std::size_t>(list.size(), limit);
  for (std::size_t i = 0; i < shown; ++i) arr.push_back(target_pair(list[i]));
  em.emit({{"count", list.size()},
           {"targets", std::move(arr)},
           {"truncated", shown < list.size()}});
  return 0;
}

int cmd_distances(const std::string& n_str, const std::string& p_str) {
  Emitter em{"distances"};
  em.inputs = {{"n", n_str}, {"p", p_str}};
  const Int n = parse_int(n_str, "n");
  const std::uint64_t p = parse_u64(p_str, "p");

  const auto dist = distance_set(n, p);
  const auto region = fundamental_region(n, p);
  json dist_arr = json::array();
  for (auto u : dist) dist_arr.push_back(dec(u));
  json region_arr = json::array(), image_arr = json::array();
  for (const auto& pt : region) {
    region_arr.push_back(point_pair(pt));
    image_arr.push_back(target_pair(gamma1(pt, n)));
  }
  em.emit({{"distances", std::move(dist_arr)},
           {"size", dist.size()},
           {"formula", dec(distance_set_size_formula(n, p))},
           {"region", std::move(region_arr)},
           {"gamma1", std::move(image_arr)}});
  return 0;
}

int cmd_hyperbola(const std::string& n_str, const std::string& mod_str,
                  std::uint64_t limit) {
  Emitter em{"hyperbola"};
  em.inputs = {{"n", n_str}, {"mod", mod_str}, {"limit", limit}};
  const Int n = parse_int(n_str, "n");
  const std::uint64_t c = parse_u64(mod_str, "mod");
  const auto pts = hyperbola_points(n, c);
  json arr = json::array();
  const std::size_t shown = std::min<std::size_t>(pts.size(), limit);
  for (std::size_t i = 0; i < shown; ++i) arr.push_back(point_pair(pts[i]));
  json dist_arr = json::array();
  for (auto u : distance_set(n, c)) dist_arr.push_back(dec(u));
  em.emit({{"count", pts.size()},
           {"points", std::move(arr)},
           {"truncated", shown < pts.size()},
           {"distances", std::move(dist_arr)}});
  return 0;
}

json stats_json(const CandidateStats& st) {
  json out{{"targetsMain", dec(st.targets_main)},
           {"targetsPrime", dec(st.targets_prime)},
           {"rootsTotal", dec(st.roots_total)},
           {"candidatesTested", dec(st.candidates_tested)}};
  if (st.naive_fermat_steps) out["naiveFermatSteps"] = dec(*st.naive_fermat_steps);
  return out;
}

int cmd_factor(const std::string& n_str, bool relaxed, std::optional<unsigned> r_override,
               unsigned threads, const std::string& candidate_limit, bool baseline) {
  Emitter em{"factor"};
  em.inputs = {{"n", n_str},
               {"relaxedSplit", relaxed},
               {"threads", threads},
               {"baseline", baseline}};
  if (r_override) em.inputs["r"] = *r_override;
  const Int n = parse_int(n_str, "n");

  if (is_probable_prime(n)) {
    em.emit({{"status", "exhausted"}, {"reason", "probable prime"}});
    return 2;
  }

  FactorizationConfig cfg;
  cfg.relaxed_split = relaxed;
  cfg.r_override = r_override;
  cfg.threads = threads;
  cfg.collect_baseline = baseline;
  if (!candidate_limit.empty())
    cfg.candidate_limit = parse_int(candidate_limit, "candidate-limit");

  const auto res = factor(n, cfg);
  json payload;
  switch (res.status) {
    case FactorStatus::found:
      payload["status"] = "found";
      break;
    case FactorStatus::exhausted:
      payload["status"] = "exhausted";
      break;
    case FactorStatus::aborted:
      payload["status"] = "aborted";
      break;
  }
  if (res.factors)
    payload["factors"] = json::array({dec(res.factors->first), dec(res.factors->second)});
  if (res.witness_x) payload["witnessX"] = dec(*res.witness_x);
  if (res.witness_y) payload["witnessY"] = dec(*res.witness_y);
  payload["stats"] = stats_json(res.stats);
  em.emit(payload);
  return res.status == FactorStatus::found ? 0 : 2;
}

json density_row_json(const DensityRow& row) {
  json out{{"B", dec(row.B)},
           {"omega", row.omega},
           {"modulus", dec(row.modulus)},
           {"valid", row.valid},
           {"hypothesisHolds", row.hypothesis_holds}};
  if (row.valid) {
    out["tau"] = dec(row.tau_value);
    out["ratio"] = dec(row.ratio);
    out["normalized4omega"] = row.normalized_4omega;
    out["normalized4pi"] = row.normalized_4pi;
    out["adjustedProduct"] = dec(row.adjusted_product);
    out["adjustedRatio"] = dec(row.adjusted_ratio);
    out["adjustedNormalized"] = row.adjusted_normalized;
  }
  return out;
}

int cmd_density(const std::string& n_str, std::uint64_t b_max, const std::string& format) {
  const Int n = parse_int(n_str, "n");
  const auto rows = density_table(n, b_max);
  if (format == "csv") {
    std::cout << "B,omega,modulus,tau,ratio,normalized4omega,normalized4pi,"
                 "adjustedProduct,adjustedRatio,adjustedNormalized,hypothesisHolds,valid\n";
    for (const auto& row : rows) {
      std::cout << row.B << ',' << row.omega << ',' << dec(row.modulus) << ',';
      if (row.valid) {
        std::cout << dec(row.tau_value) << ',' << dec(row.ratio) << ','
                  << json(row.normalized_4omega).dump() << ','
                  << json(row.normalized_4pi).dump() << ',' << dec(row.adjusted_product)
                  << ',' << dec(row.adjusted_ratio) << ','
                  << json(row.adjusted_normalized).dump() << ',';
      } else {
        std::cout << ",,,,,,,";
      }
      std::cout << (row.hypothesis_holds ? "true" : "false") << ','
                << (row.valid ? "true" : "false") << '\n';
    }
    return 0;
  }
  for (const auto& row : rows) {
    Emitter em{"density"};
    em.inputs = {{"n", n_str}, {"Bmax", b_max}, {"format", format}};
    em.emit(density_row_json(row));
  }
  return 0;
}

int cmd_selftest() {
  Emitter em{"selftest"};
  const bool ok = run_selftest(std::cerr);
  em.emit({{"allPassed", ok}});
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modular-hyperbola targets: counting, bijections and guided Fermat factoring"};
  app.require_subcommand(1);

  std::string n_str, mod_str, p_str, format = "json", candidate_limit;
  std::uint64_t b_max = 31, limit = 1000;
  bool check = false, relaxed = false, baseline = false;
  unsigned threads = 1;
  int r_value = -1;

  auto* tau_cmd = app.add_subcommand("tau", "count targets for n mod c");
  tau_cmd->add_option("--n", n_str, "n")->required();
  tau_cmd->add_option("--mod", mod_str, "modulus: integer or factorization like 3^2*7")
      ->required();
  tau_cmd->add_flag("--check", check, "compare scan and formula when both apply");

  auto* targets_cmd = app.add_subcommand("targets", "enumerate targets for n mod c");
  targets_cmd->add_option("--n", n_str)->required();
  targets_cmd->add_option("--mod", mod_str)->required();
  targets_cmd->add_option("--limit", limit, "max targets to print");

  auto* dist_cmd = app.add_subcommand("distances", "distance set of the hyperbola mod p");
  dist_cmd->add_option("--n", n_str)->required();
  dist_cmd->add_option("--p", p_str)->required();

  auto* hyp_cmd = app.add_subcommand("hyperbola", "points of the hyperbola mod c");
  hyp_cmd->add_option("--n", n_str)->required();
  hyp_cmd->add_option("--mod", mod_str)->required();
  hyp_cmd->add_option("--limit", limit, "max points to print");

  auto* factor_cmd = app.add_subcommand("factor", "guided Fermat factorization");
  factor_cmd->add_option("--n", n_str)->required();
  factor_cmd->add_flag("--relaxed-split", relaxed, "allow two-prime splits (small n)");
  factor_cmd->add_option("--r", r_value, "split index override");
  factor_cmd->add_option("--threads", threads, "scan workers");
  factor_cmd->add_option("--candidate-limit", candidate_limit, "abort after this many candidates");
  factor_cmd->add_flag("--baseline", baseline, "also run the naive Fermat baseline");

  auto* density_cmd = app.add_subcommand("density", "tau density over odd primorials");
  density_cmd->add_option("--n", n_str)->required();
  density_cmd->add_option("--Bmax", b_max, "largest prime bound")->required();
  density_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* selftest_cmd = app.add_subcommand("selftest", "run the reduced verification suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (tau_cmd->parsed()) return cmd_tau(n_str, mod_str, check);
    if (targets_cmd->parsed()) return cmd_targets(n_str, mod_str, limit);
    if (dist_cmd->parsed()) return cmd_distances(n_str, p_str);
    if (hyp_cmd->parsed()) return cmd_hyperbola(n_str, mod_str, limit);
    if (factor_cmd->parsed())
      return cmd_factor(n_str, relaxed,
                        r_value >= 0 ? std::optional<unsigned>(static_cast<unsigned>(r_value))
                                     : std::nullopt,
                        threads, candidate_limit, baseline);
    if (density_cmd->parsed()) return cmd_density(n_str, b_max, format);
    if (selftest_cmd->parsed()) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

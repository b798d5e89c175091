// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "pmq/experiments.hpp"

using namespace pmq;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool passed = true;
  std::string detail;

  void fail(const std::string& why) {
    if (passed) detail = why;
    passed = false;
  }
};

ExperimentConfig make(ExperimentKind kind, unsigned m, unsigned w, unsigned k = 2) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  cfg.m = m;
  cfg.w = w;
  cfg.k = k;
  cfg.seed = kSeed;
  return cfg;
}

std::string failed_checks(const ExperimentReport& r) {
  std::string out;
  for (const auto& c : r.checks) {
    if (!c.passed) out += (out.empty() ? "" : "; ") + c.name + " (" + c.detail + ")";
  }
  return out;
}

// Closed forms typed in directly from their statements, independent of the
// library's evaluators.
Rational bitwise_b(unsigned m, unsigned w) {
  return Rational(BigInt(m + 1), BigInt(w + 1)) *
             (BigInt(1) << (w + 2)) -
         Rational(BigInt(m + 1) * (2 * w + 4), BigInt(w + 1)) + m;
}

Rational kary_b(unsigned m, unsigned w, unsigned k) {
  const BigInt kw1 = boost::multiprecision::pow(BigInt(k), w + 1);
  return Rational(m) + Rational(BigInt(2 * (m + 1)) * (kw1 - BigInt((w + 1) * k) + w),
                                BigInt(w + 1) * (k - 1));
}

Outcome exact_tightness() {
  Outcome o;
  for (unsigned m = 1; m <= 12; ++m) {
    for (unsigned w = 1; w <= std::min(5u, m); ++w) {
      const auto r = run_experiment(make(ExperimentKind::kTrieExact, m, w));
      Rational total = 0;
      for (const auto& row : r.rows) total += row.measured;
      const Rational mean = total / Rational(BigInt(r.rows.size()));
      if (mean != bitwise_b(m, w)) {
        o.fail("m=" + std::to_string(m) + " w=" + std::to_string(w) + " mean " + to_string(mean));
      }
    }
  }
  const auto a = run_experiment(make(ExperimentKind::kTrieExact, 2, 1));
  const auto b = run_experiment(make(ExperimentKind::kTrieExact, 3, 2));
  if (a.aggregate["mean"] != "5") o.fail("(2,1) mean " + a.aggregate["mean"].dump());
  if (b.aggregate["mean"] != "41/3") o.fail("(3,2) mean " + b.aggregate["mean"].dump());
  if (o.passed) o.detail = "m<=12, 1<=w<=5; (2,1)=5, (3,2)=41/3";
  return o;
}

Outcome per_configuration_tightness() {
  Outcome o;
  std::uint64_t rows = 0;
  for (unsigned m = 1; m <= 12; ++m) {
    for (unsigned w = 1; w <= std::min(5u, m); ++w) {
      const auto r = run_experiment(make(ExperimentKind::kTrieExact, m, w));
      const auto configs = enumerate_configurations(m, w);
      for (std::size_t i = 0; i < configs.size(); ++i) {
        BigInt expected = m;
        for (unsigned j = 1; j <= w; ++j) expected += (BigInt(1) << (w - j + 1)) * configs[i].z(j);
        ++rows;
        if (r.rows.at(i).measured != Rational(expected)) {
          o.fail("m=" + std::to_string(m) + " config " + configs[i].to_string());
        }
      }
    }
  }
  if (o.passed) o.detail = std::to_string(rows) + " configurations equal";
  return o;
}

Outcome kary_tightness() {
  Outcome o;
  for (unsigned k = 2; k <= 4; ++k) {
    for (unsigned m = 1; m <= 8; ++m) {
      for (unsigned w = 1; w <= std::min(4u, m); ++w) {
        const auto r = run_experiment(make(ExperimentKind::kTrieExact, m, w, k));
        Rational total = 0;
        for (const auto& row : r.rows) total += row.measured;
        const Rational mean = total / Rational(BigInt(r.rows.size()));
        if (mean != kary_b(m, w, k) || !r.passed()) {
          o.fail("k=" + std::to_string(k) + " m=" + std::to_string(m) + " w=" + std::to_string(w));
        }
      }
    }
  }
  const auto spot = run_experiment(make(ExperimentKind::kTrieExact, 1, 1, 3));
  if (spot.aggregate["mean"] != "5") o.fail("(1,1,3) mean " + spot.aggregate["mean"].dump());
  if (o.passed) o.detail = "k in {2,3,4}, m<=8, w<=4; (1,1,3)=5";
  return o;
}

Outcome arbitrary_tries() {
  auto cfg = make(ExperimentKind::kTrieRandom, 12, 4);
  cfg.population = 1024;
  cfg.trials = 10000;
  const auto r = run_experiment(cfg);
  Outcome o;
  if (!r.passed()) o.fail(failed_checks(r));
  else o.detail = "10^4 trials at m=12 w=4, mean " + r.aggregate["mean_decimal"].get<std::string>() +
                  " vs b " + r.aggregate["b_decimal"].get<std::string>();
  return o;
}

Outcome formula_identities() {
  const auto r = run_experiment(make(ExperimentKind::kIdentitySweep, 20, 0));
  Outcome o;
  if (!r.passed()) o.fail(failed_checks(r));
  else o.detail = std::to_string(r.rows.size()) + " exact equalities for m<=20";
  return o;
}

Outcome position_law_check() {
  auto cfg = make(ExperimentKind::kPositionLaw, 12, 4);
  cfg.trials = 100000;
  const auto r = run_experiment(cfg);
  Outcome o;
  if (!r.passed()) o.fail(failed_checks(r));
  else o.detail = "m=12 w=4, 10^5 draws, " + std::to_string(r.rows.size()) + " cells within 3 sigma";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  Rng rng(derive_seed(kSeed, 100, 0));
  for (unsigned t = 0; t < 1000; ++t) {
    const unsigned k = 2 + static_cast<unsigned>(uniform_below(rng, 3));
    unsigned max_m = 0;
    while (*checked_power(k, max_m + 1) <= 4096) ++max_m;
    const unsigned m = 1 + static_cast<unsigned>(uniform_below(rng, max_m));
    unsigned max_w = 0;
    while (max_w < m && *checked_power(k, max_w + 1) <= 256) ++max_w;
    const unsigned w = static_cast<unsigned>(uniform_below(rng, max_w + 1));
    const std::uint64_t space = *checked_power(k, m);
    const Trie trie = random_trie(k, m, uniform_below(rng, space + 1), rng());
    const auto pattern =
        QueryPattern::from_configuration(sample_configuration(m, w, rng), k, uniform_below(rng, space));
    if (algorithm_query(trie, pattern).matches != oracle_query(trie, pattern)) {
      o.fail("mismatch on pattern " + pattern.to_string() + " k=" + std::to_string(k));
    }
  }
  if (o.passed) o.detail = "0 mismatches in 10^3 instances";
  return o;
}

Outcome chord_single() {
  auto cfg = make(ExperimentKind::kChordSingle, 12, 0);
  cfg.n = 256;
  const auto r = run_experiment(cfg);
  Outcome o;
  if (!r.passed()) o.fail(failed_checks(r));
  else o.detail = std::to_string(r.aggregate["lookups"].get<std::uint64_t>()) +
                  " lookups correct and halving, max hops " + r.aggregate["max"].get<std::string>();
  return o;
}

Outcome chord_wildcard() {
  Outcome o;
  std::string detail;
  for (unsigned w = 2; w <= 4; ++w) {
    auto cfg = make(ExperimentKind::kChordWildcard, 16, w);
    cfg.n = 1024;
    cfg.trials = 1000;
    const auto r = run_experiment(cfg);
    if (!r.passed()) o.fail("w=" + std::to_string(w) + ": " + failed_checks(r));
    detail += (detail.empty() ? "" : ", ") + std::string("w=") + std::to_string(w) + " mean " +
              r.aggregate["mean_decimal"].get<std::string>() + " vs b " +
              r.aggregate["b_decimal"].get<std::string>();
  }
  if (o.passed) o.detail = detail;
  return o;
}

Outcome chord_decay() {
  auto cfg = make(ExperimentKind::kChordDecay, 16, 0);
  cfg.n = 256;
  cfg.entries_factor = {1, 2, 4, 8};
  cfg.trials = 20;
  cfg.lookups = 500;
  const auto r = run_experiment(cfg);
  Outcome o;
  if (!r.passed()) o.fail(failed_checks(r));
  else o.detail = r.checks.front().detail;
  return o;
}

Outcome reproducibility() {
  Outcome o;
  for (const auto kind : all_experiments()) {
    auto cfg = make(kind, 10, 3);
    cfg.n = 64;
    cfg.trials = kind == ExperimentKind::kChordDecay ? 3 : 200;
    cfg.lookups = 100;
    cfg.entries_factor = {1, 4};
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    for (const auto format : {ReportFormat::kCsv, ReportFormat::kJson}) {
      if (render(a, format) != render(b, format)) {
        o.fail(std::string(experiment_name(kind)) + " differs between runs");
      }
    }
  }
  if (o.passed) o.detail = "all 7 experiments byte-identical in CSV and JSON";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact tightness on complete bitwise tries", 60, exact_tightness},
      {2, "per-configuration tightness", 60, per_configuration_tightness},
      {3, "k-ary tightness", 120, kary_tightness},
      {4, "upper bound on arbitrary tries", 60, arbitrary_tries},
      {5, "formula identities", 10, formula_identities},
      {6, "position law", 30, position_law_check},
      {7, "oracle equivalence", 60, oracle_equivalence},
      {8, "chord single lookup", 120, chord_single},
      {9, "wildcard DHT queries", 300, chord_wildcard},
      {10, "chord correctness decay", 300, chord_decay},
      {11, "reproducibility", 300, reproducibility},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (seconds > c.limit_seconds) {
      o.fail("took " + std::to_string(seconds) + " s, limit " + std::to_string(c.limit_seconds));
    }
    failures += !o.passed;
    std::printf("%s criterion %2d %-44s %7.2fs  %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name,
                seconds, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

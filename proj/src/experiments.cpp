#include "pmq/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "pmq/errors.hpp"

namespace pmq {

namespace {

struct NamedKind {
  ExperimentKind kind;
  std::string_view name;
};

constexpr NamedKind kKinds[] = {
    {ExperimentKind::kTrieExact, "trie-exact"},
    {ExperimentKind::kTrieRandom, "trie-random"},
    {ExperimentKind::kIdentitySweep, "identity-sweep"},
    {ExperimentKind::kPositionLaw, "position-law"},
    {ExperimentKind::kChordSingle, "chord-single"},
    {ExperimentKind::kChordWildcard, "chord-wildcard"},
    {ExperimentKind::kChordDecay, "chord-decay"},
};

// Seed streams; one per experiment so the same --seed never couples two runs.
enum Stream : std::uint64_t {
  kTrieExactStream = 1,
  kTrieRandomStream,
  kPositionLawStream,
  kChordSingleStream,
  kChordWildcardStream,
  kDecayNodesStream,
  kDecayEntriesStream,
  kDecayLookupsStream,
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string scientific(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Rational mean_of(const std::vector<ReportRow>& rows) {
  if (rows.empty()) return Rational(0);
  Rational total = 0;
  for (const auto& r : rows) total += r.measured;
  return total / Rational(BigInt(rows.size()));
}

Rational max_of(const std::vector<ReportRow>& rows) {
  Rational best = 0;
  for (const auto& r : rows) best = std::max(best, r.measured);
  return best;
}

/// Sample standard deviation of the measured column, as a double.
double stddev_of(const std::vector<ReportRow>& rows, double mean) {
  if (rows.size() < 2) return 0;
  double acc = 0;
  for (const auto& r : rows) {
    const double d = to_double(r.measured) - mean;
    acc += d * d;
  }
  return std::sqrt(acc / double(rows.size() - 1));
}

void put_common_aggregate(ExperimentReport& report) {
  const Rational mean = mean_of(report.rows);
  report.aggregate["rows"] = report.rows.size();
  report.aggregate["mean"] = to_string(mean);
  report.aggregate["mean_decimal"] = fixed(to_double(mean), 6);
  report.aggregate["max"] = to_string(max_of(report.rows));
  const auto violations = std::count_if(report.rows.begin(), report.rows.end(),
                                        [](const ReportRow& r) { return !r.ok; });
  report.aggregate["row_violations"] = violations;
}

void put_bound(ExperimentReport& report, const std::string& key, const Rational& b) {
  report.aggregate[key + "_num"] = numerator_of(b).str();
  report.aggregate[key + "_den"] = denominator_of(b).str();
  report.aggregate[key + "_decimal"] = fixed(to_double(b), 6);
}

void check_rows(ExperimentReport& report, const std::string& what) {
  const auto bad = std::count_if(report.rows.begin(), report.rows.end(),
                                 [](const ReportRow& r) { return !r.ok; });
  report.check(what, bad == 0, std::to_string(bad) + " violating rows");
}

std::uint64_t binomial_u64(unsigned n, unsigned r) {
  const BigInt c = binomial(n, r);
  return c > BigInt(~std::uint64_t{0}) ? ~std::uint64_t{0} : c.convert_to<std::uint64_t>();
}

[[noreturn]] void too_big(const std::string& what, const std::string& hint) {
  throw SizeError(what + "; " + hint);
}

}  // namespace

std::string_view experiment_name(ExperimentKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

const std::vector<ExperimentKind>& all_experiments() {
  static const std::vector<ExperimentKind> kinds = [] {
    std::vector<ExperimentKind> v;
    for (const auto& k : kKinds) v.push_back(k.kind);
    return v;
  }();
  return kinds;
}

FingerMode ExperimentConfig::finger_mode() const {
  if (mode) return *mode;
  return experiment == ExperimentKind::kChordDecay ? FingerMode::kEntryBound
                                                   : FingerMode::kFull;
}

std::uint64_t ExperimentConfig::trie_population() const {
  if (population) return *population;
  const auto space = checked_power(k, m);
  return space ? *space / 4 : 0;
}

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void ExperimentReport::check(std::string name, bool ok, std::string detail) {
  checks.push_back({std::move(name), ok, std::move(detail)});
}

void validate(const ExperimentConfig& cfg) {
  const std::string name(experiment_name(cfg.experiment));
  if (cfg.m < 1) too_big(name + ": m must be >= 1", "use --m 1 or more");
  if (cfg.k < 2) too_big(name + ": k must be >= 2", "use --k 2 or more");
  if (cfg.w > cfg.m) too_big(name + ": w exceeds m", "reduce --w");
  const auto space = checked_power(cfg.k, cfg.m);
  auto check_chord = [&](unsigned max_m) {
    if (cfg.m > max_m) too_big(name + ": m > " + std::to_string(max_m), "use --m <= " + std::to_string(max_m));
    if (cfg.n < 2 || cfg.n > (std::uint64_t{1} << cfg.m) || cfg.n > (1u << 12)) {
      too_big(name + ": n outside [2, min(2^m, 4096)]", "adjust --n");
    }
    for (const unsigned c : cfg.entries_factor) {
      if (std::uint64_t{c} * cfg.m * cfg.n > (std::uint64_t{1} << 24)) {
        too_big(name + ": C m n exceeds 2^24 entries", "reduce --entries-factor or --n");
      }
    }
  };

  switch (cfg.experiment) {
    case ExperimentKind::kTrieExact: {
      if (!space || *space > kDefaultKeySpaceLimit) {
        too_big(name + ": k^m exceeds 2^22", "reduce --m or --k");
      }
      const std::uint64_t configs = binomial_u64(cfg.m, cfg.w);
      if (configs > (std::uint64_t{1} << 20) || configs * *space > (std::uint64_t{1} << 32)) {
        too_big(name + ": C(m,w) * k^m exceeds 2^32", "reduce --m or --w");
      }
      break;
    }
    case ExperimentKind::kTrieRandom: {
      if (!space || *space > kDefaultKeySpaceLimit) {
        too_big(name + ": k^m exceeds 2^22", "reduce --m or --k");
      }
      if (cfg.trie_population() > *space) too_big(name + ": population exceeds k^m", "reduce --population");
      const auto expansions = checked_power(cfg.k, cfg.w);
      if (!expansions || *expansions > (std::uint64_t{1} << 16)) {
        too_big(name + ": k^w exceeds 2^16", "reduce --w");
      }
      if (cfg.trials < 1 || cfg.trials > 1'000'000) too_big(name + ": trials outside [1, 10^6]", "adjust --trials");
      break;
    }
    case ExperimentKind::kIdentitySweep:
      if (cfg.m > 25) too_big(name + ": m > 25", "use --m <= 25");
      break;
    case ExperimentKind::kPositionLaw:
      if (cfg.m > 64) too_big(name + ": m > 64", "use --m <= 64");
      if (cfg.w < 1) too_big(name + ": w must be >= 1", "use --w 1 or more");
      if (cfg.trials < 1 || cfg.trials > 10'000'000) too_big(name + ": trials outside [1, 10^7]", "adjust --trials");
      break;
    case ExperimentKind::kChordSingle:
      check_chord(16);
      if ((std::uint64_t{1} << cfg.m) * cfg.n > (std::uint64_t{1} << 26)) {
        too_big(name + ": exhaustive sweep 2^m * n exceeds 2^26 lookups", "reduce --m or --n");
      }
      break;
    case ExperimentKind::kChordWildcard:
      check_chord(16);
      if (cfg.w > 6) too_big(name + ": w > 6", "use --w <= 6");
      if (cfg.trials < 1 || cfg.trials > 100'000) too_big(name + ": trials outside [1, 10^5]", "adjust --trials");
      break;
    case ExperimentKind::kChordDecay:
      check_chord(16);
      if (cfg.entries_factor.empty()) too_big(name + ": no entries factor", "pass --entries-factor 1,2,4,8");
      if (cfg.trials < 1 || cfg.trials > 1000) too_big(name + ": trials (seeds) outside [1, 1000]", "adjust --trials");
      if (cfg.lookups < 1 || cfg.lookups > 100'000) too_big(name + ": lookups outside [1, 10^5]", "adjust --lookups");
      break;
  }
}

ExperimentReport run_trie_exact(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  const Trie trie = complete_trie(cfg.k, cfg.m);
  const auto configs = enumerate_configurations(cfg.m, cfg.w);
  for (std::uint64_t i = 0; i < configs.size(); ++i) {
    // Fixed letters are arbitrary on a complete trie; draw them.
    const std::uint64_t seed = derive_seed(cfg.seed, kTrieExactStream, i);
    Rng rng(seed);
    const auto pattern =
        QueryPattern::from_configuration(configs[i], cfg.k, uniform_below(rng, trie.key_space()));
    const auto result = algorithm_query(trie, pattern);
    const BigInt expected = s_hat(cfg.m, cfg.w, configs[i], cfg.k);
    ReportRow row{cfg.m, cfg.w, cfg.k, 0, configs[i].to_string(), i,
                  Rational(BigInt(result.steps)), Rational(expected),
                  BigInt(result.steps) == expected, seed};
    report.rows.push_back(std::move(row));
  }

  const Rational b = average_bound(cfg.m, cfg.w, cfg.k);
  const Rational mean = mean_of(report.rows);
  put_common_aggregate(report);
  put_bound(report, "b", b);
  check_rows(report, "steps == s_hat for every configuration");
  report.check("mean steps == b", mean == b, to_string(mean) + " vs " + to_string(b));
  if (cfg.w >= 1) {
    const Rational smw = s_mw_sum(cfg.m, cfg.w, cfg.k);
    report.check("hypergeometric sum == b", smw == b, to_string(smw) + " vs " + to_string(b));
  }
  return report;
}

ExperimentReport run_trie_random(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  const std::uint64_t population = cfg.trie_population();
  std::uint64_t oracle_mismatches = 0;
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    const std::uint64_t seed = derive_seed(cfg.seed, kTrieRandomStream, i);
    Rng rng(seed);
    const Trie trie = random_trie(cfg.k, cfg.m, population, rng());
    const auto config = sample_configuration(cfg.m, cfg.w, rng);
    const auto pattern =
        QueryPattern::from_configuration(config, cfg.k, uniform_below(rng, trie.key_space()));
    const auto result = algorithm_query(trie, pattern);
    const bool oracle_ok = result.matches == oracle_query(trie, pattern);
    oracle_mismatches += !oracle_ok;
    const BigInt bound = s_hat(cfg.m, cfg.w, config, cfg.k);
    report.rows.push_back({cfg.m, cfg.w, cfg.k, 0, config.to_string(), i,
                           Rational(BigInt(result.steps)), Rational(bound),
                           oracle_ok && BigInt(result.steps) <= bound, seed});
  }

  const Rational b = average_bound(cfg.m, cfg.w, cfg.k);
  const Rational mean = mean_of(report.rows);
  const double sd = stddev_of(report.rows, to_double(mean));
  const double tolerance = 3 * sd / std::sqrt(double(cfg.trials));
  put_common_aggregate(report);
  put_bound(report, "b", b);
  report.aggregate["population"] = population;
  report.aggregate["stddev"] = fixed(sd, 6);
  report.aggregate["mean_over_b"] = format_ratio(mean, b);
  report.aggregate["oracle_mismatches"] = oracle_mismatches;
  check_rows(report, "steps <= s_hat and oracle agreement on every trial");
  report.check("mean <= b + 3 sigma", to_double(mean) <= to_double(b) + tolerance,
               fixed(to_double(mean), 6) + " <= " + fixed(to_double(b), 6) + " + " +
                   fixed(tolerance, 6));
  return report;
}

ExperimentReport run_identity_sweep(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  std::uint64_t trial = 0;
  std::uint64_t identity_violations = 0, sum_violations = 0;
  for (unsigned m = 1; m <= cfg.m; ++m) {
    for (unsigned w = 1; w <= m; ++w) {
      for (unsigned j = 1; j <= w; ++j) {
        const IdentityCheck c = binomial_identity_check(m, w, j);
        identity_violations += !c.holds();
        report.rows.push_back({m, w, 2, 0, "identity j=" + std::to_string(j), trial++,
                               Rational(c.lhs), Rational(c.rhs), c.holds(), cfg.seed});
      }
    }
  }
  for (unsigned m = 1; m <= cfg.m; ++m) {
    for (unsigned w = 1; w <= m; ++w) {
      const Rational smw = s_mw_sum(m, w);
      const Rational b = average_bound(m, w, 2);
      sum_violations += smw != b;
      report.rows.push_back({m, w, 2, 0, "s_mw", trial++, smw, b, smw == b, cfg.seed});
    }
  }
  put_common_aggregate(report);
  report.aggregate["identity_violations"] = identity_violations;
  report.aggregate["sum_violations"] = sum_violations;
  report.check("sum_z C(z,j) C(m-z,w-j) == C(m+1,w+1)", identity_violations == 0,
               std::to_string(identity_violations) + " violations");
  report.check("hypergeometric sum == closed form", sum_violations == 0,
               std::to_string(sum_violations) + " violations");
  return report;
}

ExperimentReport run_position_law(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  const unsigned m = cfg.m, w = cfg.w;
  std::vector<std::vector<std::uint64_t>> count(w + 1, std::vector<std::uint64_t>(m + 1, 0));
  const std::uint64_t seed = derive_seed(cfg.seed, kPositionLawStream, 0);
  Rng rng(seed);
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    const auto c = sample_configuration(m, w, rng);
    for (unsigned j = 1; j <= w; ++j) ++count[j][c.z(j)];
  }

  bool normalized = true;
  std::uint64_t trial = 0;
  const double draws = double(cfg.trials);
  for (unsigned j = 1; j <= w; ++j) {
    Rational total = 0;
    for (unsigned z = 1; z <= m; ++z) {
      const Rational p = position_law(m, w, z, j);
      total += p;
      const Rational freq(BigInt(count[j][z]), BigInt(cfg.trials));
      const double pd = to_double(p);
      const double sigma = std::sqrt(pd * (1 - pd) / draws);
      const bool ok = sigma == 0 ? freq == p
                                 : std::abs(to_double(freq) - pd) <= 3 * sigma;
      report.rows.push_back({m, w, 2, 0,
                             "j=" + std::to_string(j) + " z=" + std::to_string(z), trial++,
                             freq, p, ok, seed});
    }
    normalized = normalized && total == 1;
  }
  put_common_aggregate(report);
  report.aggregate["draws"] = cfg.trials;
  report.check("sum_z p(z,j) == 1 for every j", normalized);
  check_rows(report, "empirical z_j frequencies within 3 sigma");
  return report;
}

ExperimentReport run_chord_single(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  const std::uint64_t seed = derive_seed(cfg.seed, kChordSingleStream, 0);
  auto net = ChordNetwork::build(cfg.n, cfg.m, seed, cfg.finger_mode());
  const unsigned c = cfg.entries_factor.empty() ? 1 : cfg.entries_factor.front();
  net.distribute_entries(std::uint64_t{c} * cfg.m * cfg.n, derive_seed(seed, 0, 1));
  const bool full = cfg.finger_mode() == FingerMode::kFull;

  std::uint64_t lookups = 0, incorrect = 0, halving_failures = 0, over_m = 0, errors = 0;
  BigInt total_hops = 0;
  for (Address s = 0; s < net.size(); ++s) {
    unsigned max_hops = 0;
    bool ok = true;
    for (std::uint64_t d = 0; d < net.key_space(); ++d) {
      const LookupOutcome out = net.lookup(d, s, cfg.stall);
      ++lookups;
      total_hops += out.hops;
      max_hops = std::max(max_hops, out.hops);
      const bool halves = halves_distance_each_hop(net, d, out);
      incorrect += !out.correct;
      errors += out.error_case;
      over_m += out.hops > cfg.m;
      halving_failures += !halves;
      ok = ok && out.correct && out.hops <= cfg.m && (!full || halves);
    }
    report.rows.push_back({cfg.m, 0, 2, cfg.n, "start=" + std::to_string(net.node(s).key), s,
                           Rational(max_hops), Rational(cfg.m), ok, seed});
  }
  put_common_aggregate(report);
  const Rational mean_hops{total_hops, BigInt(lookups)};
  report.aggregate["lookups"] = lookups;
  report.aggregate["mean_hops"] = to_string(mean_hops);
  report.aggregate["mean_hops_decimal"] = fixed(to_double(mean_hops), 6);
  report.aggregate["incorrect"] = incorrect;
  report.aggregate["error_cases"] = errors;
  report.aggregate["halving_failures"] = halving_failures;
  report.aggregate["hops_over_m"] = over_m;
  report.check("every lookup correct", incorrect == 0, std::to_string(incorrect) + " incorrect");
  report.check("hops <= m", over_m == 0, std::to_string(over_m) + " lookups over m");
  if (full) {
    report.check("distance to target halves every hop", halving_failures == 0,
                 std::to_string(halving_failures) + " paths fail");
  }
  return report;
}

ExperimentReport run_chord_wildcard(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  const unsigned c = cfg.entries_factor.empty() ? 1 : cfg.entries_factor.front();
  std::uint64_t locality_failures = 0, incorrect = 0, first_over_m = 0;
  std::uint64_t strict_exceedances = 0;  // lookups with h_i > flipped position
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    // Network, entries, and (configuration, fixed bits, start) each get their
    // own sub-seed of the trial seed.
    const std::uint64_t seed = derive_seed(cfg.seed, kChordWildcardStream, i);
    auto net = ChordNetwork::build(cfg.n, cfg.m, derive_seed(seed, 0, 0), cfg.finger_mode());
    net.distribute_entries(std::uint64_t{c} * cfg.m * cfg.n, derive_seed(seed, 0, 1));
    Rng rng(derive_seed(seed, 0, 2));
    const auto config = sample_configuration(cfg.m, cfg.w, rng);
    const auto pattern =
        QueryPattern::from_configuration(config, 2, uniform_below(rng, net.key_space()));
    const auto start = static_cast<Address>(uniform_below(rng, net.size()));
    const auto r = net.natural_query(pattern, start, cfg.stall);

    bool local = true;
    for (std::size_t t = 1; t < r.per_key_hops.size(); ++t) {
      local = local && r.per_key_hops[t] <= 2 * r.flipped_position[t];
      strict_exceedances += r.per_key_hops[t] > r.flipped_position[t];
    }
    locality_failures += !local;
    incorrect += !r.all_correct();
    first_over_m += r.per_key_hops.front() > cfg.m;
    const BigInt bound = s_hat(cfg.m, cfg.w, config);
    report.rows.push_back({cfg.m, cfg.w, 2, cfg.n, config.to_string(), i,
                           Rational(BigInt(r.total_hops)), Rational(bound),
                           BigInt(r.total_hops) <= bound && r.all_correct(), seed});
  }

  const Rational b = average_bound(cfg.m, cfg.w, 2);
  const Rational mean = mean_of(report.rows);
  const Rational naive = Rational(BigInt(1) << cfg.w) * cfg.m;
  put_common_aggregate(report);
  put_bound(report, "b", b);
  report.aggregate["naive_bound"] = to_string(naive);
  report.aggregate["mean_over_b"] = format_ratio(mean, b);
  report.aggregate["mean_over_naive"] = format_ratio(mean, naive);
  report.aggregate["locality_failures"] = locality_failures;
  report.aggregate["incorrect_queries"] = incorrect;
  report.aggregate["one_bit_per_hop_exceedances"] = strict_exceedances;
  check_rows(report, "total hops <= s_hat and all answers correct on every run");
  report.check("first lookup hops <= m", first_over_m == 0,
               std::to_string(first_over_m) + " runs over m");
  report.check("h_i <= 2 * flipped position", locality_failures == 0,
               std::to_string(locality_failures) + " runs fail");
  report.check("mean <= b + m", mean <= b + cfg.m,
               to_string(mean) + " vs " + to_string(b + cfg.m));
  if (cfg.w == 0) {
    report.check("mean <= m", mean <= cfg.m, to_string(mean));
  } else {
    report.check("mean < 0.5 * 2^w * m", mean < naive / 2,
                 to_string(mean) + " vs " + to_string(naive / 2));
  }
  return report;
}

ExperimentReport run_chord_decay(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  std::vector<unsigned> factors = cfg.entries_factor;
  std::sort(factors.begin(), factors.end());
  factors.erase(std::unique(factors.begin(), factors.end()), factors.end());

  nlohmann::ordered_json per_factor = nlohmann::ordered_json::array();
  std::vector<Rational> rates;
  std::uint64_t over_m = 0;
  std::uint64_t trial = 0;
  for (const unsigned c : factors) {
    std::uint64_t errors = 0, incorrect = 0, total = 0;
    unsigned max_ok_hops = 0;
    for (std::uint64_t s = 0; s < cfg.trials; ++s) {
      // The same seed set for every C: node keys and the entry stream are
      // shared, so a larger C only adds entries.
      const std::uint64_t seed = derive_seed(cfg.seed, kDecayNodesStream, s);
      auto net = ChordNetwork::build(cfg.n, cfg.m, seed, cfg.finger_mode());
      const std::uint64_t entries = std::uint64_t{c} * cfg.m * cfg.n;
      net.distribute_entries(entries, derive_seed(cfg.seed, kDecayEntriesStream, s));
      std::vector<std::uint64_t> stored;
      stored.reserve(entries);
      for (Address a = 0; a < net.size(); ++a) {
        for (const auto& e : net.entries_at(a)) stored.push_back(e.data_key);
      }
      std::sort(stored.begin(), stored.end());

      Rng rng(derive_seed(cfg.seed, kDecayLookupsStream, s));
      std::uint64_t seed_errors = 0;
      bool ok = true;
      for (std::uint64_t l = 0; l < cfg.lookups; ++l) {
        const std::uint64_t d =
            stored.empty() ? uniform_below(rng, net.key_space()) : stored[uniform_below(rng, stored.size())];
        const auto start = static_cast<Address>(uniform_below(rng, net.size()));
        const LookupOutcome out = net.lookup(d, start, cfg.stall);
        const bool error = out.error_case || !out.correct;
        seed_errors += error;
        incorrect += !out.correct;
        if (!error) {
          max_ok_hops = std::max(max_ok_hops, out.hops);
          if (out.hops > cfg.m) {
            ++over_m;
            ok = false;
          }
        }
      }
      errors += seed_errors;
      total += cfg.lookups;
      report.rows.push_back({cfg.m, 0, 2, cfg.n, "C=" + std::to_string(c), trial++,
                             Rational(BigInt(seed_errors), BigInt(cfg.lookups)), std::nullopt, ok,
                             seed});
    }
    const Rational rate{BigInt(errors), BigInt(total)};
    rates.push_back(rate);
    nlohmann::ordered_json entry;
    entry["C"] = c;
    entry["lookups"] = total;
    entry["errors"] = errors;
    entry["incorrect"] = incorrect;
    entry["error_rate"] = to_string(rate);
    entry["error_rate_decimal"] = fixed(to_double(rate), 6);
    entry["reference_exp_minus_Cm_over_2"] = scientific(std::exp(-double(c) * cfg.m / 2));
    entry["max_hops_non_error"] = max_ok_hops;
    per_factor.push_back(std::move(entry));
  }
  put_common_aggregate(report);
  report.aggregate["per_factor"] = std::move(per_factor);

  bool monotone = true;
  for (std::size_t i = 1; i < rates.size(); ++i) monotone = monotone && rates[i] <= rates[i - 1];
  std::string trend;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    trend += (i ? " " : "") + std::string("C=") + std::to_string(factors[i]) + ":" +
             fixed(to_double(rates[i]), 6);
  }
  report.check("error rate non-increasing in C", monotone, trend);
  report.check("non-error lookups use <= m hops", over_m == 0,
               std::to_string(over_m) + " lookups over m");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i] >= 8) {
      report.check("zero errors at C=" + std::to_string(factors[i]), rates[i] == 0,
                   to_string(rates[i]));
    }
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report;
  switch (cfg.experiment) {
    case ExperimentKind::kTrieExact: report = run_trie_exact(cfg); break;
    case ExperimentKind::kTrieRandom: report = run_trie_random(cfg); break;
    case ExperimentKind::kIdentitySweep: report = run_identity_sweep(cfg); break;
    case ExperimentKind::kPositionLaw: report = run_position_law(cfg); break;
    case ExperimentKind::kChordSingle: report = run_chord_single(cfg); break;
    case ExperimentKind::kChordWildcard: report = run_chord_wildcard(cfg); break;
    case ExperimentKind::kChordDecay: report = run_chord_decay(cfg); break;
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace pmq

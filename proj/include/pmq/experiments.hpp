#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "pmq/analysis.hpp"
#include "pmq/dht.hpp"

namespace pmq {

inline constexpr std::string_view kToolVersion = "pmq 1.0.0";

enum class ExperimentKind {
  kTrieExact,
  kTrieRandom,
  kIdentitySweep,
  kPositionLaw,
  kChordSingle,
  kChordWildcard,
  kChordDecay,
};

std::string_view experiment_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment(std::string_view name);
const std::vector<ExperimentKind>& all_experiments();

enum class ReportFormat { kCsv, kJson };

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kTrieExact;
  unsigned m = 8;
  unsigned w = 2;
  unsigned k = 2;
  std::uint64_t n = 256;
  /// Keys per random trie; defaults to k^m / 4.
  std::optional<std::uint64_t> population;
  /// C in N = C m n; chord-decay sweeps every listed value.
  std::vector<unsigned> entries_factor{1};
  std::uint64_t trials = 1000;
  /// Lookups per network in chord-decay.
  std::uint64_t lookups = 500;
  std::uint64_t seed = 0;
  /// Defaults to entry-bound for chord-decay and full otherwise.
  std::optional<FingerMode> mode;
  StallPolicy stall = StallPolicy::kDecideAbsent;
  ReportFormat format = ReportFormat::kCsv;
  std::string out = "-";
  /// Adds wall-clock time to JSON output (which then stops being byte-stable).
  bool timing = false;

  FingerMode finger_mode() const;
  std::uint64_t trie_population() const;
};

/// Keys mirror the CLI flag names ("entries-factor", "population", ...).
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

/// Throws SizeError with a sizing hint when the run is outside the desk-scale
/// limits documented in the README.
void validate(const ExperimentConfig& cfg);

struct ReportRow {
  unsigned m = 0;
  unsigned w = 0;
  unsigned k = 0;
  std::uint64_t n = 0;
  std::string param;
  std::uint64_t trial = 0;
  Rational measured;
  std::optional<Rational> bound;
  bool ok = true;
  std::uint64_t seed = 0;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  /// Named aggregate values in emission order; exact values are rendered as
  /// "p/q" strings, derived floating values with fixed precision.
  nlohmann::ordered_json aggregate = nlohmann::ordered_json::object();
  std::vector<Check> checks;
  double wall_clock_seconds = 0;

  bool passed() const;
  void check(std::string name, bool passed, std::string detail = {});
};

ExperimentReport run_trie_exact(const ExperimentConfig& cfg);
ExperimentReport run_trie_random(const ExperimentConfig& cfg);
ExperimentReport run_identity_sweep(const ExperimentConfig& cfg);
ExperimentReport run_position_law(const ExperimentConfig& cfg);
ExperimentReport run_chord_single(const ExperimentConfig& cfg);
ExperimentReport run_chord_wildcard(const ExperimentConfig& cfg);
ExperimentReport run_chord_decay(const ExperimentConfig& cfg);

/// Validates, dispatches on cfg.experiment, and records wall-clock time.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

inline constexpr std::string_view kCsvHeader =
    "experiment,m,w,k,n,param,trial,measured,bound_num,bound_den,ratio,ok,seed";

void write_csv(const ExperimentReport& report, std::ostream& out);
void write_json(const ExperimentReport& report, std::ostream& out);
std::string render(const ExperimentReport& report, ReportFormat format);

/// Writes to `path`, or stdout for "-". I/O failures throw std::runtime_error
/// naming the path.
void emit(const ExperimentReport& report, ReportFormat format, const std::string& path);

/// Fixed-precision decimal, "" when undefined.
std::string format_ratio(const Rational& measured, const std::optional<Rational>& bound);

}  // namespace pmq

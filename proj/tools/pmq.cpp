// pmq: runs the partial-match query experiments and a few inspection commands.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "pmq/errors.hpp"
#include "pmq/experiments.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::optional<unsigned> m, w, k;
  std::optional<std::uint64_t> n, population, trials, lookups, seed;
  std::vector<unsigned> entries_factor;
  std::optional<std::string> mode, stall, format;
  std::string out = "-";
  std::string config;
  bool timing = false;
};

void add_experiment_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--m", f.m, "key length in letters (bits for chord runs)");
  cmd.add_option("--w", f.w, "wildcards per query");
  cmd.add_option("--k", f.k, "trie arity");
  cmd.add_option("--n", f.n, "chord nodes");
  cmd.add_option("--population", f.population, "keys per random trie (default k^m/4)");
  cmd.add_option("--entries-factor", f.entries_factor, "C in N = C m n; comma list for chord-decay")
      ->delimiter(',');
  cmd.add_option("--trials", f.trials, "trials (configuration draws, seeds for chord-decay)");
  cmd.add_option("--lookups", f.lookups, "lookups per network in chord-decay");
  cmd.add_option("--seed", f.seed, "base seed");
  cmd.add_option("--mode", f.mode, "finger mode")->check(CLI::IsMember({"full", "entry-bound"}));
  cmd.add_option("--stall", f.stall, "what a lookup does when no hop improves a bit")
      ->check(CLI::IsMember({"decide-absent", "continue"}));
  cmd.add_option("--format", f.format, "report format")->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--out", f.out, "output path, - for stdout");
  cmd.add_option("--config", f.config, "JSON config file; flags given on the command line win");
  cmd.add_flag("--timing", f.timing, "add wall-clock seconds to JSON output");
}

nlohmann::json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw pmq::ShapeError("config '" + path + "': " + e.what());
  }
}

pmq::ExperimentConfig build_config(pmq::ExperimentKind kind, const Flags& f,
                                   const CLI::App& cmd) {
  nlohmann::json j = nlohmann::json::object();
  if (!f.config.empty()) j = read_config_file(f.config);
  if (!j.is_object()) throw pmq::ShapeError("config must be a JSON object");
  if (j.contains("experiment") && j["experiment"] != std::string(pmq::experiment_name(kind))) {
    throw pmq::ShapeError("config names experiment " + j["experiment"].dump() +
                          " but the subcommand is " + std::string(pmq::experiment_name(kind)));
  }
  j["experiment"] = pmq::experiment_name(kind);
  if (f.m) j["m"] = *f.m;
  if (f.w) j["w"] = *f.w;
  if (f.k) j["k"] = *f.k;
  if (f.n) j["n"] = *f.n;
  if (f.population) j["population"] = *f.population;
  if (!f.entries_factor.empty()) j["entries-factor"] = f.entries_factor;
  if (f.trials) j["trials"] = *f.trials;
  if (f.lookups) j["lookups"] = *f.lookups;
  if (f.seed) j["seed"] = *f.seed;
  if (f.mode) j["mode"] = *f.mode;
  if (f.stall) j["stall"] = *f.stall;
  if (f.format) j["format"] = *f.format;
  if (cmd.count("--out") || !j.contains("out")) j["out"] = f.out;
  if (f.timing) j["timing"] = true;
  if (!j.contains("seed")) throw pmq::ShapeError("--seed is required (directly or in --config)");
  return pmq::config_from_json(j);
}

int run_experiment(pmq::ExperimentKind kind, const Flags& f, const CLI::App& cmd) {
  const pmq::ExperimentConfig cfg = build_config(kind, f, cmd);
  const pmq::ExperimentReport report = pmq::run_experiment(cfg);
  pmq::emit(report, cfg.format, cfg.out);
  for (const auto& c : report.checks) {
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) std::cerr << " (" << c.detail << ")";
    std::cerr << '\n';
  }
  return report.passed() ? kExitPass : kExitViolation;
}

int run_query(const std::string& text, unsigned arity, std::optional<std::uint64_t> population,
              std::uint64_t seed) {
  const auto pattern = pmq::QueryPattern::parse(text);
  if (arity < pattern.min_arity()) {
    throw pmq::ShapeError("pattern letters need k >= " + std::to_string(pattern.min_arity()));
  }
  const unsigned m = pattern.length();
  const pmq::Trie trie = population ? pmq::random_trie(arity, m, *population, seed)
                                    : pmq::complete_trie(arity, m);
  const auto result = pmq::algorithm_query(trie, pattern);
  const auto config = pattern.configuration();
  const unsigned w = config.wildcard_count();
  nlohmann::ordered_json j;
  j["pattern"] = pattern.to_string();
  j["k"] = arity;
  j["m"] = m;
  j["w"] = w;
  j["configuration"] = config.to_string();
  j["trie"] = population ? "random" : "complete";
  j["members"] = trie.size();
  j["steps"] = result.steps;
  j["s_hat"] = pmq::s_hat(m, w, config, arity).str();
  j["b"] = pmq::to_string(pmq::average_bound(m, w, arity));
  auto matches = nlohmann::ordered_json::array();
  for (const auto key : result.matches) {
    std::string s(m, '0');
    for (unsigned p = 1; p <= m; ++p) {
      const unsigned letter = pmq::letter_at(key, arity, p);
      s[m - p] = letter < 10 ? char('0' + letter) : char('a' + letter - 10);
    }
    matches.push_back(s);
  }
  j["matches"] = std::move(matches);
  std::cout << j.dump(2) << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-match queries over tries and a simulated Chord ring"};
  app.set_version_flag("--version", std::string(pmq::kToolVersion));
  app.require_subcommand(1);

  std::map<pmq::ExperimentKind, Flags> flags;
  std::map<pmq::ExperimentKind, CLI::App*> commands;
  for (const auto kind : pmq::all_experiments()) {
    auto* cmd = app.add_subcommand(std::string(pmq::experiment_name(kind)),
                                   "run the " + std::string(pmq::experiment_name(kind)) + " experiment");
    add_experiment_flags(*cmd, flags[kind]);
    commands[kind] = cmd;
  }

  unsigned snap_m = 12;
  std::uint64_t snap_n = 256, snap_seed = 0;
  unsigned snap_c = 0;
  std::string snap_mode = "full", snap_out = "-";
  auto* snapshot = app.add_subcommand("snapshot", "print a network's routing tables");
  snapshot->add_option("--m", snap_m, "key bits");
  snapshot->add_option("--n", snap_n, "nodes");
  snapshot->add_option("--entries-factor", snap_c, "C in N = C m n");
  snapshot->add_option("--seed", snap_seed, "seed")->required();
  snapshot->add_option("--mode", snap_mode, "finger mode")
      ->check(CLI::IsMember({"full", "entry-bound"}));
  snapshot->add_option("--out", snap_out, "output path, - for stdout");

  std::string pattern_text;
  unsigned query_k = 2;
  std::optional<std::uint64_t> query_population;
  std::uint64_t query_seed = 0;
  auto* query = app.add_subcommand("query", "run one pattern against a trie and print the cost");
  query->add_option("pattern", pattern_text, "pattern such as 1*0*0")->required();
  query->add_option("--k", query_k, "trie arity");
  query->add_option("--population", query_population, "use a random trie with this many keys");
  query->add_option("--seed", query_seed, "seed for the random trie");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    for (const auto& [kind, cmd] : commands) {
      if (cmd->parsed()) return run_experiment(kind, flags[kind], *cmd);
    }
    if (snapshot->parsed()) {
      const auto mode = snap_mode == "full" ? pmq::FingerMode::kFull : pmq::FingerMode::kEntryBound;
      if (snap_m < 1 || snap_m > pmq::kMaxKeyBits) {
        throw pmq::SizeError("--m must be in [1, " + std::to_string(pmq::kMaxKeyBits) + "]");
      }
      auto net = pmq::ChordNetwork::build(snap_n, snap_m, pmq::derive_seed(snap_seed, 0, 0), mode);
      net.distribute_entries(std::uint64_t{snap_c} * snap_m * snap_n,
                             pmq::derive_seed(snap_seed, 0, 1));
      if (snap_out == "-") {
        net.write_snapshot(std::cout);
      } else {
        std::ofstream file(snap_out, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open '" + snap_out + "' for writing");
        net.write_snapshot(file);
        if (!file) throw std::runtime_error("failed writing '" + snap_out + "'");
      }
      return kExitPass;
    }
    if (query->parsed()) return run_query(pattern_text, query_k, query_population, query_seed);
  } catch (const std::exception& e) {
    std::cerr << "pmq: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pmq/errors.hpp"
#include "pmq/experiments.hpp"

namespace pmq {

namespace {

std::string_view mode_name(FingerMode mode) {
  return mode == FingerMode::kFull ? "full" : "entry-bound";
}

std::string_view stall_name(StallPolicy policy) {
  return policy == StallPolicy::kDecideAbsent ? "decide-absent" : "continue";
}

std::string_view format_name(ReportFormat format) {
  return format == ReportFormat::kCsv ? "csv" : "json";
}

template <class T>
T required(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError(std::string("config key '") + key + "': " + e.what());
  }
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ShapeError("config must be a JSON object");
  static const std::set<std::string> known = {
      "experiment", "m",     "w",    "k",     "n",      "population", "entries-factor",
      "trials",     "lookups", "seed", "mode", "stall", "format",     "out",
      "timing"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ShapeError("unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  if (j.contains("experiment")) {
    const auto name = required<std::string>(j, "experiment");
    const auto kind = parse_experiment(name);
    if (!kind) throw ShapeError("unknown experiment '" + name + "'");
    cfg.experiment = *kind;
  }
  if (j.contains("m")) cfg.m = required<unsigned>(j, "m");
  if (j.contains("w")) cfg.w = required<unsigned>(j, "w");
  if (j.contains("k")) cfg.k = required<unsigned>(j, "k");
  if (j.contains("n")) cfg.n = required<std::uint64_t>(j, "n");
  if (j.contains("population")) cfg.population = required<std::uint64_t>(j, "population");
  if (j.contains("entries-factor")) {
    const auto& e = j.at("entries-factor");
    cfg.entries_factor = e.is_array() ? required<std::vector<unsigned>>(j, "entries-factor")
                                      : std::vector<unsigned>{required<unsigned>(j, "entries-factor")};
  }
  if (j.contains("trials")) cfg.trials = required<std::uint64_t>(j, "trials");
  if (j.contains("lookups")) cfg.lookups = required<std::uint64_t>(j, "lookups");
  if (j.contains("seed")) cfg.seed = required<std::uint64_t>(j, "seed");
  if (j.contains("mode")) {
    const auto s = required<std::string>(j, "mode");
    if (s == "full") cfg.mode = FingerMode::kFull;
    else if (s == "entry-bound") cfg.mode = FingerMode::kEntryBound;
    else throw ShapeError("mode must be full or entry-bound, got '" + s + "'");
  }
  if (j.contains("stall")) {
    const auto s = required<std::string>(j, "stall");
    if (s == "decide-absent") cfg.stall = StallPolicy::kDecideAbsent;
    else if (s == "continue") cfg.stall = StallPolicy::kContinue;
    else throw ShapeError("stall must be decide-absent or continue, got '" + s + "'");
  }
  if (j.contains("format")) {
    const auto s = required<std::string>(j, "format");
    if (s == "csv") cfg.format = ReportFormat::kCsv;
    else if (s == "json") cfg.format = ReportFormat::kJson;
    else throw ShapeError("format must be csv or json, got '" + s + "'");
  }
  if (j.contains("out")) cfg.out = required<std::string>(j, "out");
  if (j.contains("timing")) cfg.timing = required<bool>(j, "timing");
  return cfg;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["experiment"] = experiment_name(cfg.experiment);
  j["m"] = cfg.m;
  j["w"] = cfg.w;
  j["k"] = cfg.k;
  j["n"] = cfg.n;
  j["population"] = cfg.trie_population();
  j["entries-factor"] = cfg.entries_factor;
  j["trials"] = cfg.trials;
  j["lookups"] = cfg.lookups;
  j["seed"] = cfg.seed;
  j["mode"] = mode_name(cfg.finger_mode());
  j["stall"] = stall_name(cfg.stall);
  j["format"] = format_name(cfg.format);
  return j;
}

std::string format_ratio(const Rational& measured, const std::optional<Rational>& bound) {
  if (!bound || *bound == 0) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", to_double(measured / *bound));
  return buf;
}

void write_csv(const ExperimentReport& report, std::ostream& out) {
  const auto name = experiment_name(report.config.experiment);
  out << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << name << ',' << r.m << ',' << r.w << ',' << r.k << ',' << r.n << ',' << r.param << ','
        << r.trial << ',' << to_string(r.measured) << ',';
    if (r.bound) {
      out << numerator_of(*r.bound) << ',' << denominator_of(*r.bound);
    } else {
      out << ',';
    }
    out << ',' << format_ratio(r.measured, r.bound) << ',' << bool_text(r.ok) << ',' << r.seed
        << '\n';
  }
}

void write_json(const ExperimentReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["tool"] = kToolVersion;
  j["config"] = config_to_json(report.config);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["m"] = r.m;
    row["w"] = r.w;
    row["k"] = r.k;
    row["n"] = r.n;
    row["param"] = r.param;
    row["trial"] = r.trial;
    row["measured"] = to_string(r.measured);
    row["bound"] = r.bound ? nlohmann::ordered_json(to_string(*r.bound)) : nlohmann::ordered_json();
    row["ratio"] = format_ratio(r.measured, r.bound);
    row["ok"] = r.ok;
    row["seed"] = r.seed;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["aggregate"] = report.aggregate;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  j["passed"] = report.passed();
  if (report.config.timing) j["wall_clock_seconds"] = report.wall_clock_seconds;
  out << j.dump(2) << '\n';
}

std::string render(const ExperimentReport& report, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::kCsv) {
    write_csv(report, out);
  } else {
    write_json(report, out);
  }
  return out.str();
}

void emit(const ExperimentReport& report, ReportFormat format, const std::string& path) {
  const std::string text = render(report, format);
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing to stdout");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace pmq

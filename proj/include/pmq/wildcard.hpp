#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmq/random.hpp"
#include "pmq/trie.hpp"

namespace pmq {

/// Wildcard positions z_1 < z_2 < ... < z_w of a query, each in [1, m].
/// z_1 is the least significant wildcard.
class Configuration {
 public:
  Configuration() = default;
  /// Throws RangeError unless `positions` is strictly increasing within [1, m].
  Configuration(std::vector<unsigned> positions, unsigned length);

  unsigned length() const { return length_; }
  unsigned wildcard_count() const { return static_cast<unsigned>(positions_.size()); }
  /// z_j for j in [1, w].
  unsigned z(unsigned j) const { return positions_.at(j - 1); }
  const std::vector<unsigned>& positions() const { return positions_; }
  bool has_wildcard_at(unsigned pos) const;

  /// "2;4" style, least significant first. Empty for w = 0.
  std::string to_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  unsigned length_ = 0;
  std::vector<unsigned> positions_;
};

/// An m-letter query where each letter is fixed or a wildcard. Stored left to
/// right, so letters()[0] is position m.
class QueryPattern {
 public:
  using Symbol = std::optional<unsigned>;  // nullopt = wildcard

  explicit QueryPattern(std::vector<Symbol> letters);

  /// Text form over {0-9, a-z, '*'}; the leftmost character is position m.
  /// "1*0*0" has configuration {2, 4}.
  static QueryPattern parse(std::string_view text);

  /// Pattern with wildcards at `config` and the remaining letters copied from
  /// the base-`arity` digits of `fixed`.
  static QueryPattern from_configuration(const Configuration& config,
                                         unsigned arity, Key fixed);

  unsigned length() const { return static_cast<unsigned>(letters_.size()); }
  unsigned wildcard_count() const { return configuration_.wildcard_count(); }
  /// Letter at position pos in [1, m].
  const Symbol& at(unsigned pos) const { return letters_[letters_.size() - pos]; }
  const std::vector<Symbol>& letters() const { return letters_; }
  const Configuration& configuration() const { return configuration_; }
  /// Largest fixed letter plus one (at least 2).
  unsigned min_arity() const;

  std::string to_string() const;

  friend bool operator==(const QueryPattern& a, const QueryPattern& b) {
    return a.letters_ == b.letters_;
  }

 private:
  std::vector<Symbol> letters_;
  Configuration configuration_;
};

struct QueryResult {
  /// Matching members, in expansion order (ascending wildcard odometer).
  std::vector<Key> matches;
  std::uint64_t steps = 0;
  /// Steps attributed to each of the k^w expansions, indexed by the odometer
  /// value sum_j value(z_j) * k^(j-1). Expansions pruned by an earlier miss
  /// receive 0.
  std::vector<std::uint64_t> per_key_steps;
  /// Expansions whose membership was decided (always k^w on return).
  std::uint64_t keys_decided = 0;
};

/// Largest k^w expanded by algorithm_query / oracle_query.
inline constexpr std::uint64_t kDefaultExpansionLimit = std::uint64_t{1} << 20;

/// Depth-first backtracking search: resolve the expansion with every wildcard
/// at letter 0, then repeatedly step back to the deepest wildcard that still
/// has untried letters, advance it, and search down again. A missing edge
/// decides every expansion below it at once. Every edge walked, up or down,
/// costs one step.
QueryResult algorithm_query(const Trie& trie, const QueryPattern& pattern,
                            std::uint64_t expansion_limit = kDefaultExpansionLimit);

/// Brute force: tests each of the k^w concrete keys with Trie::contains.
std::vector<Key> oracle_query(const Trie& trie, const QueryPattern& pattern,
                              std::uint64_t expansion_limit = kDefaultExpansionLimit);

/// Uniform w-subset of [1, m].
Configuration sample_configuration(unsigned length, unsigned wildcards, Rng& rng);
Configuration sample_configuration(unsigned length, unsigned wildcards,
                                   std::uint64_t seed);

/// Largest C(m, w) enumerate_configurations will produce.
inline constexpr std::uint64_t kDefaultConfigurationLimit = std::uint64_t{1} << 22;

/// All C(m, w) configurations in lexicographic order.
std::vector<Configuration> enumerate_configurations(
    unsigned length, unsigned wildcards,
    std::uint64_t limit = kDefaultConfigurationLimit);

}  // namespace pmq

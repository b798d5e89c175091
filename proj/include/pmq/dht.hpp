#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmq/random.hpp"
#include "pmq/wildcard.hpp"

namespace pmq {

/// Largest key width the simulator accepts.
inline constexpr unsigned kMaxKeyBits = 24;

enum class Metric {
  kRing,  // (to - from) mod 2^m, clockwise
  kXor,
};

/// Distance from `from` to `to` in an m-bit key space.
std::uint64_t key_distance(Metric metric, std::uint64_t from, std::uint64_t to,
                           unsigned bits);

enum class FingerMode {
  kFull,        // all m fingers
  kEntryBound,  // finger i exists iff the owner stores >= i entries
};

/// What a lookup does when no routing-table node improves at least one bit.
enum class StallPolicy {
  kDecideAbsent,  // stop and answer NotFound
  kContinue,      // move to the closest non-overshooting node anyway
};

using Address = std::uint32_t;

struct NodeId {
  std::uint64_t key = 0;
  Address address = 0;
};

struct Entry {
  std::uint64_t data_key = 0;
  std::uint64_t value = 0;
};

struct RoutingTable {
  NodeId owner;
  Address successor = 0;
  Address predecessor = 0;
  /// fingers[i - 1] points at the successor of key(owner) + 2^(i-1).
  std::vector<std::optional<Address>> fingers;
};

enum class Answer { kFound, kNotFound };

struct LookupOutcome {
  Answer answer = Answer::kNotFound;
  bool correct = false;
  unsigned hops = 0;
  std::vector<Address> path;  // starts with the start node
  /// Some hop had no bit-improving table entry, or the hop cap was hit.
  bool error_case = false;
};

struct NaturalQueryResult {
  std::vector<std::uint64_t> matches;  // keys answered Found, protocol order
  /// Per expansion, in protocol (odometer) order.
  std::vector<unsigned> per_key_hops;
  std::vector<bool> per_key_correct;
  /// Wildcard position flipped before each lookup; 0 for the first.
  std::vector<unsigned> flipped_position;
  std::uint64_t total_hops = 0;
  bool error_case = false;
  Address final_node = 0;

  bool all_correct() const;
};

/// Static Chord ring over m-bit keys. Entries live at the successor of their
/// data key. Built once; lookups are const and may run concurrently.
class ChordNetwork {
 public:
  /// n distinct uniformly sampled node keys. Requires 2 <= n <= 2^m, m <= 24.
  static ChordNetwork build(std::uint64_t nodes, unsigned bits, std::uint64_t seed,
                            FingerMode mode);
  /// Ring with the given node keys (need not be sorted; must be distinct).
  static ChordNetwork from_keys(std::vector<std::uint64_t> keys, unsigned bits,
                                FingerMode mode);

  unsigned bits() const { return bits_; }
  std::uint64_t key_space() const { return std::uint64_t{1} << bits_; }
  std::size_t size() const { return nodes_.size(); }
  FingerMode mode() const { return mode_; }
  /// A lookup never takes more than 4m hops.
  unsigned hop_cap() const { return 4 * bits_; }

  /// Nodes in ring order; address == index.
  std::span<const NodeId> nodes() const { return nodes_; }
  const NodeId& node(Address a) const { return nodes_.at(a); }
  const RoutingTable& table(Address a) const { return tables_.at(a); }
  std::span<const Entry> entries_at(Address a) const { return entries_.at(a); }
  std::size_t entry_count() const { return data_keys_.size(); }

  /// Node whose key is the first at or after d, clockwise.
  Address successor_of_key(std::uint64_t d) const;

  /// Stores <d, value> at the successor of d.
  void store(std::uint64_t data_key, std::uint64_t value);

  /// Adds `count` entries, each placed at a node drawn uniformly and
  /// independently; the data key is uniform over that node's arc so the
  /// entry still sits at the successor of its key.
  void distribute_entries(std::uint64_t count, std::uint64_t seed);

  /// Omniscient membership.
  bool ground_truth(std::uint64_t data_key) const;

  /// Greedy lookup from `start` toward the node responsible for d.
  LookupOutcome lookup(std::uint64_t data_key, Address start,
                       StallPolicy policy = StallPolicy::kDecideAbsent) const;

  /// Resolves every expansion of a binary pattern: all wildcards 0 first, then
  /// flip the least significant unfinished wildcard, each lookup starting
  /// where the previous one ended.
  NaturalQueryResult natural_query(const QueryPattern& pattern, Address start,
                                   StallPolicy policy = StallPolicy::kDecideAbsent,
                                   std::uint64_t expansion_limit = std::uint64_t{1} << 16) const;

  /// One line per node: key succ_key pred_key f1,...,fm entry_count, with
  /// '-' for an absent finger; preceded by a '#' header line.
  void write_snapshot(std::ostream& out) const;
  std::string snapshot() const;

 private:
  ChordNetwork(std::vector<std::uint64_t> sorted_keys, unsigned bits, FingerMode mode);
  void rebuild_table(Address a);
  void rebuild_tables();

  unsigned bits_;
  FingerMode mode_;
  std::vector<NodeId> nodes_;
  /// finger_targets_[a][i-1] = successor of key(a) + 2^(i-1), independent of mode.
  std::vector<std::vector<Address>> finger_targets_;
  std::vector<RoutingTable> tables_;
  std::vector<std::vector<Entry>> entries_;
  std::vector<std::uint64_t> data_keys_;  // sorted
};

/// True when every hop of `out` at least halves the clockwise distance to the
/// node responsible for d.
bool halves_distance_each_hop(const ChordNetwork& net, std::uint64_t d,
                              const LookupOutcome& out);

/// Brute-force scan: the node minimizing key_distance(metric, d, key(node)).
/// Under kRing this is the successor of d.
Address closest_by_metric(std::span<const NodeId> nodes, std::uint64_t d,
                          Metric metric, unsigned bits);

}  // namespace pmq

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pmq/random.hpp"

namespace pmq {

/// A key is an integer in [0, k^m), read as m base-k letters. Letter
/// positions are numbered m..1 from the most significant end, so position p
/// holds the digit of weight k^(p-1).
using Key = std::uint64_t;

/// Largest k^m a trie will materialize through complete_trie/random_trie.
inline constexpr std::uint64_t kDefaultKeySpaceLimit = std::uint64_t{1} << 22;

/// Edge-traversal counter. Charges one per edge walked in either direction.
class StepCounter {
 public:
  void charge(std::uint64_t edges = 1) { steps_ += edges; }
  std::uint64_t steps() const { return steps_; }
  void reset() { steps_ = 0; }

 private:
  std::uint64_t steps_ = 0;
};

/// Returns k^m, or nullopt when it does not fit in 64 bits.
std::optional<std::uint64_t> checked_power(std::uint64_t k, unsigned m);

/// Letter at position `pos` (1-based, 1 = least significant) of a key.
unsigned letter_at(Key key, unsigned arity, unsigned pos);

/// Fixed-depth k-ary trie. Children are kept as a dense k-slot array per node;
/// every stored key occupies a full root-to-leaf path of exactly m edges.
class Trie {
 public:
  using NodeIndex = std::uint32_t;
  static constexpr NodeIndex kRoot = 0;

  Trie(unsigned arity, unsigned depth);

  unsigned arity() const { return arity_; }
  unsigned depth() const { return depth_; }
  /// k^m.
  std::uint64_t key_space() const { return key_space_; }
  std::size_t node_count() const { return child_slots_.size() / arity_; }
  std::size_t size() const { return members_; }
  bool empty() const { return members_ == 0; }

  /// Idempotent. Does not count steps.
  void insert(Key key);

  /// Walks down from the root, charging one step per edge. A miss stops at
  /// the deepest matching prefix.
  bool contains(Key key, StepCounter& counter) const;
  bool contains(Key key) const;

  /// Child of `node` along `letter`, if present. Never charges steps; callers
  /// that move along the returned edge charge it themselves.
  std::optional<NodeIndex> child(NodeIndex node, unsigned letter) const {
    const NodeIndex c = child_slots_[static_cast<std::size_t>(node) * arity_ + letter];
    if (c == kNone) return std::nullopt;
    return c;
  }

  /// All members, ascending.
  std::vector<Key> members() const;

  friend bool operator==(const Trie& a, const Trie& b) {
    return a.arity_ == b.arity_ && a.depth_ == b.depth_ &&
           a.child_slots_ == b.child_slots_;
  }

 private:
  static constexpr NodeIndex kNone = 0;  // the root is never a child

  void check_key(Key key) const;
  NodeIndex add_node();

  unsigned arity_;
  unsigned depth_;
  std::uint64_t key_space_;
  std::size_t members_ = 0;
  std::vector<NodeIndex> child_slots_;
};

/// Trie holding all k^m keys.
Trie complete_trie(unsigned arity, unsigned depth,
                   std::uint64_t key_space_limit = kDefaultKeySpaceLimit);

/// Trie holding exactly `population` distinct keys drawn uniformly; the member
/// set is a function of (arity, depth, population, seed).
Trie random_trie(unsigned arity, unsigned depth, std::uint64_t population,
                 std::uint64_t seed,
                 std::uint64_t key_space_limit = kDefaultKeySpaceLimit);

}  // namespace pmq

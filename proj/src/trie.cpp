#include "pmq/trie.hpp"

#include <limits>
#include <string>

#include "pmq/errors.hpp"

namespace pmq {

std::optional<std::uint64_t> checked_power(std::uint64_t k, unsigned m) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (k != 0 && r > std::numeric_limits<std::uint64_t>::max() / k) {
      return std::nullopt;
    }
    r *= k;
  }
  return r;
}

unsigned letter_at(Key key, unsigned arity, unsigned pos) {
  for (unsigned i = 1; i < pos; ++i) key /= arity;
  return static_cast<unsigned>(key % arity);
}

Trie::Trie(unsigned arity, unsigned depth) : arity_(arity), depth_(depth) {
  if (arity < 2) throw RangeError("trie arity must be at least 2");
  if (depth < 1) throw RangeError("trie depth must be at least 1");
  const auto space = checked_power(arity, depth);
  if (!space) throw SizeError("k^m does not fit in a 64-bit key");
  key_space_ = *space;
  add_node();
}

void Trie::check_key(Key key) const {
  if (key >= key_space_) {
    throw RangeError("key " + std::to_string(key) + " outside [0, " +
                     std::to_string(key_space_) + ")");
  }
}

Trie::NodeIndex Trie::add_node() {
  const std::size_t index = node_count();
  if (index >= std::numeric_limits<NodeIndex>::max()) {
    throw SizeError("trie node index space exhausted");
  }
  child_slots_.resize(child_slots_.size() + arity_, kNone);
  return static_cast<NodeIndex>(index);
}

void Trie::insert(Key key) {
  check_key(key);
  NodeIndex node = kRoot;
  bool created = false;
  for (unsigned pos = depth_; pos >= 1; --pos) {
    const std::size_t slot =
        static_cast<std::size_t>(node) * arity_ + letter_at(key, arity_, pos);
    if (child_slots_[slot] == kNone) {
      const NodeIndex fresh = add_node();
      child_slots_[slot] = fresh;  // add_node may reallocate; index stays valid
      created = true;
    }
    node = child_slots_[slot];
  }
  if (created) ++members_;
}

bool Trie::contains(Key key, StepCounter& counter) const {
  check_key(key);
  NodeIndex node = kRoot;
  for (unsigned pos = depth_; pos >= 1; --pos) {
    const auto next = child(node, letter_at(key, arity_, pos));
    if (!next) return false;
    counter.charge();
    node = *next;
  }
  return true;
}

bool Trie::contains(Key key) const {
  StepCounter scratch;
  return contains(key, scratch);
}

std::vector<Key> Trie::members() const {
  std::vector<Key> out;
  out.reserve(members_);
  // Depth-first in letter order yields ascending keys.
  struct Frame {
    NodeIndex node;
    unsigned depth;
    Key prefix;
  };
  std::vector<Frame> stack{{kRoot, 0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.depth == depth_) {
      out.push_back(f.prefix);
      continue;
    }
    for (unsigned letter = arity_; letter-- > 0;) {
      if (const auto c = child(f.node, letter)) {
        stack.push_back({*c, f.depth + 1, f.prefix * arity_ + letter});
      }
    }
  }
  return out;
}

namespace {

void check_limit(unsigned arity, unsigned depth, std::uint64_t limit) {
  const auto space = checked_power(arity, depth);
  if (!space || *space > limit) {
    throw SizeError("k^m for k=" + std::to_string(arity) + ", m=" +
                    std::to_string(depth) + " exceeds key space limit " +
                    std::to_string(limit));
  }
}

}  // namespace

Trie complete_trie(unsigned arity, unsigned depth, std::uint64_t key_space_limit) {
  Trie trie(arity, depth);
  check_limit(arity, depth, key_space_limit);
  for (Key key = 0; key < trie.key_space(); ++key) trie.insert(key);
  return trie;
}

Trie random_trie(unsigned arity, unsigned depth, std::uint64_t population,
                 std::uint64_t seed, std::uint64_t key_space_limit) {
  Trie trie(arity, depth);
  check_limit(arity, depth, key_space_limit);
  if (population > trie.key_space()) {
    throw RangeError("population " + std::to_string(population) +
                     " exceeds key space " + std::to_string(trie.key_space()));
  }
  Rng rng(seed);
  for (const Key key : sample_distinct(rng, trie.key_space(), population)) {
    trie.insert(key);
  }
  return trie;
}

}  // namespace pmq

#include "pmq/dht.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <sstream>
#include <string>

#include "pmq/errors.hpp"

namespace pmq {

std::uint64_t key_distance(Metric metric, std::uint64_t from, std::uint64_t to,
                           unsigned bits) {
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  switch (metric) {
    case Metric::kRing:
      return (to - from) & mask;
    case Metric::kXor:
      return (to ^ from) & mask;
  }
  return 0;
}

Address closest_by_metric(std::span<const NodeId> nodes, std::uint64_t d,
                          Metric metric, unsigned bits) {
  if (nodes.empty()) throw RangeError("closest_by_metric: no nodes");
  Address best = nodes.front().address;
  std::uint64_t best_dist = key_distance(metric, d, nodes.front().key, bits);
  for (const auto& n : nodes) {
    const std::uint64_t dist = key_distance(metric, d, n.key, bits);
    if (dist < best_dist) {
      best = n.address;
      best_dist = dist;
    }
  }
  return best;
}

bool halves_distance_each_hop(const ChordNetwork& net, std::uint64_t d,
                              const LookupOutcome& out) {
  const std::uint64_t target = net.node(net.successor_of_key(d)).key;
  for (std::size_t i = 0; i + 1 < out.path.size(); ++i) {
    const auto before =
        key_distance(Metric::kRing, net.node(out.path[i]).key, target, net.bits());
    const auto after =
        key_distance(Metric::kRing, net.node(out.path[i + 1]).key, target, net.bits());
    if (2 * after > before) return false;
  }
  return true;
}

bool NaturalQueryResult::all_correct() const {
  return std::all_of(per_key_correct.begin(), per_key_correct.end(),
                     [](bool c) { return c; });
}

namespace {

void check_bits(unsigned bits) {
  if (bits < 1 || bits > kMaxKeyBits) {
    throw RangeError("key width m = " + std::to_string(bits) + " outside [1, " +
                     std::to_string(kMaxKeyBits) + "]");
  }
}

}  // namespace

ChordNetwork ChordNetwork::build(std::uint64_t nodes, unsigned bits,
                                 std::uint64_t seed, FingerMode mode) {
  check_bits(bits);
  if (nodes < 2 || nodes > (std::uint64_t{1} << bits)) {
    throw RangeError("node count " + std::to_string(nodes) + " outside [2, 2^" +
                     std::to_string(bits) + "]");
  }
  Rng rng(seed);
  return ChordNetwork(sample_distinct(rng, std::uint64_t{1} << bits, nodes), bits, mode);
}

ChordNetwork ChordNetwork::from_keys(std::vector<std::uint64_t> keys, unsigned bits,
                                     FingerMode mode) {
  check_bits(bits);
  std::sort(keys.begin(), keys.end());
  if (keys.size() < 2) throw RangeError("a ring needs at least two nodes");
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw RangeError("node keys must be distinct");
  }
  if (keys.back() >= (std::uint64_t{1} << bits)) throw RangeError("node key out of range");
  return ChordNetwork(std::move(keys), bits, mode);
}

ChordNetwork::ChordNetwork(std::vector<std::uint64_t> sorted_keys, unsigned bits,
                           FingerMode mode)
    : bits_(bits), mode_(mode) {
  nodes_.reserve(sorted_keys.size());
  for (std::size_t i = 0; i < sorted_keys.size(); ++i) {
    nodes_.push_back({sorted_keys[i], static_cast<Address>(i)});
  }
  entries_.resize(nodes_.size());
  finger_targets_.resize(nodes_.size());
  for (const auto& n : nodes_) {
    auto& targets = finger_targets_[n.address];
    targets.reserve(bits_);
    for (unsigned i = 1; i <= bits_; ++i) {
      targets.push_back(successor_of_key(n.key + (std::uint64_t{1} << (i - 1))));
    }
  }
  tables_.resize(nodes_.size());
  rebuild_tables();
}

Address ChordNetwork::successor_of_key(std::uint64_t d) const {
  d &= key_space() - 1;
  const auto it = std::lower_bound(
      nodes_.begin(), nodes_.end(), d,
      [](const NodeId& n, std::uint64_t key) { return n.key < key; });
  return it == nodes_.end() ? nodes_.front().address : it->address;
}

void ChordNetwork::rebuild_table(Address a) {
  const auto n = static_cast<Address>(nodes_.size());
  RoutingTable& t = tables_[a];
  t.owner = nodes_[a];
  t.successor = (a + 1) % n;
  t.predecessor = (a + n - 1) % n;
  t.fingers.assign(bits_, std::nullopt);
  const std::size_t stored = entries_[a].size();
  for (unsigned i = 1; i <= bits_; ++i) {
    if (mode_ == FingerMode::kFull || stored >= i) {
      t.fingers[i - 1] = finger_targets_[a][i - 1];
    }
  }
}

void ChordNetwork::rebuild_tables() {
  for (Address a = 0; a < nodes_.size(); ++a) rebuild_table(a);
}

void ChordNetwork::store(std::uint64_t data_key, std::uint64_t value) {
  if (data_key >= key_space()) throw RangeError("data key out of range");
  const Address a = successor_of_key(data_key);
  entries_[a].push_back({data_key, value});
  data_keys_.insert(std::upper_bound(data_keys_.begin(), data_keys_.end(), data_key),
                    data_key);
  rebuild_table(a);
}

void ChordNetwork::distribute_entries(std::uint64_t count, std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<Address>(nodes_.size());
  data_keys_.reserve(data_keys_.size() + count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto a = static_cast<Address>(uniform_below(rng, n));
    const std::uint64_t pred_key = nodes_[(a + n - 1) % n].key;
    const std::uint64_t arc = key_distance(Metric::kRing, pred_key, nodes_[a].key, bits_);
    const std::uint64_t offset = uniform_below(rng, arc);
    const std::uint64_t d = (nodes_[a].key - offset) & (key_space() - 1);
    entries_[a].push_back({d, entry_count() + i});
    data_keys_.push_back(d);
  }
  std::sort(data_keys_.begin(), data_keys_.end());
  rebuild_tables();
}

bool ChordNetwork::ground_truth(std::uint64_t data_key) const {
  return std::binary_search(data_keys_.begin(), data_keys_.end(), data_key);
}

LookupOutcome ChordNetwork::lookup(std::uint64_t data_key, Address start,
                                   StallPolicy policy) const {
  if (start >= nodes_.size()) throw RangeError("start node out of range");
  if (data_key >= key_space()) throw RangeError("data key out of range");
  const Address target = successor_of_key(data_key);
  const std::uint64_t target_key = nodes_[target].key;

  LookupOutcome out;
  out.path.push_back(start);
  Address current = start;
  while (current != target) {
    if (out.hops == hop_cap()) {
      out.error_case = true;
      break;
    }
    const std::uint64_t remaining =
        key_distance(Metric::kRing, nodes_[current].key, target_key, bits_);
    const RoutingTable& t = tables_[current];

    // Closest table node on the arc (current, target]; never overshoots.
    std::optional<Address> best;
    std::uint64_t best_dist = remaining;
    auto consider = [&](Address u) {
      if (u == current) return;
      const std::uint64_t ahead = key_distance(Metric::kRing, nodes_[current].key,
                                               nodes_[u].key, bits_);
      if (ahead > remaining) return;
      const std::uint64_t dist = key_distance(Metric::kRing, nodes_[u].key, target_key, bits_);
      if (dist < best_dist ||
          (dist == best_dist && best && nodes_[u].key < nodes_[*best].key)) {
        best = u;
        best_dist = dist;
      }
    };
    consider(t.successor);
    consider(t.predecessor);
    for (const auto& f : t.fingers) {
      if (f) consider(*f);
    }

    if (!best) {
      out.error_case = true;
      break;
    }
    // remaining lies in [2^(g-1), 2^g); a bit-improving hop lands below 2^(g-1).
    const std::uint64_t half = std::bit_floor(remaining);
    if (best_dist >= half) {
      out.error_case = true;
      if (policy == StallPolicy::kDecideAbsent) break;
    }
    current = *best;
    ++out.hops;
    out.path.push_back(current);
  }

  bool found = false;
  if (current == target) {
    const auto& stored = entries_[current];
    found = std::any_of(stored.begin(), stored.end(),
                        [&](const Entry& e) { return e.data_key == data_key; });
  }
  out.answer = found ? Answer::kFound : Answer::kNotFound;
  out.correct = found == ground_truth(data_key);
  return out;
}

NaturalQueryResult ChordNetwork::natural_query(const QueryPattern& pattern,
                                               Address start, StallPolicy policy,
                                               std::uint64_t expansion_limit) const {
  if (pattern.length() != bits_) {
    throw ShapeError("pattern length " + std::to_string(pattern.length()) +
                     " != key width " + std::to_string(bits_));
  }
  if (pattern.min_arity() > 2) throw ShapeError("DHT patterns must be binary");
  const Configuration& config = pattern.configuration();
  const unsigned w = config.wildcard_count();
  if (w >= 64 || (std::uint64_t{1} << w) > expansion_limit) {
    throw SizeError("2^w exceeds expansion limit " + std::to_string(expansion_limit));
  }

  std::uint64_t key = 0;
  for (unsigned pos = 1; pos <= bits_; ++pos) {
    if (const auto& s = pattern.at(pos)) key |= std::uint64_t{*s} << (pos - 1);
  }

  NaturalQueryResult out;
  const std::uint64_t expansions = std::uint64_t{1} << w;
  Address current = start;
  unsigned flipped = 0;
  for (std::uint64_t i = 0;; ++i) {
    const LookupOutcome lk = lookup(key, current, policy);
    current = lk.path.back();
    out.per_key_hops.push_back(lk.hops);
    out.per_key_correct.push_back(lk.correct);
    out.flipped_position.push_back(flipped);
    out.total_hops += lk.hops;
    out.error_case = out.error_case || lk.error_case;
    if (lk.answer == Answer::kFound) out.matches.push_back(key);
    if (i + 1 == expansions) break;

    // Least significant wildcard still at 0 flips to 1; those below reset.
    unsigned j = 1;
    while (key >> (config.z(j) - 1) & 1) {
      key &= ~(std::uint64_t{1} << (config.z(j) - 1));
      ++j;
    }
    flipped = config.z(j);
    key |= std::uint64_t{1} << (flipped - 1);
  }
  out.final_node = current;
  return out;
}

void ChordNetwork::write_snapshot(std::ostream& out) const {
  out << "# chord-snapshot bits=" << bits_ << " nodes=" << nodes_.size()
      << " mode=" << (mode_ == FingerMode::kFull ? "full" : "entry-bound")
      << " entries=" << entry_count() << '\n';
  for (const auto& t : tables_) {
    out << t.owner.key << ' ' << nodes_[t.successor].key << ' '
        << nodes_[t.predecessor].key << ' ';
    for (unsigned i = 0; i < t.fingers.size(); ++i) {
      if (i > 0) out << ',';
      if (t.fingers[i]) {
        out << nodes_[*t.fingers[i]].key;
      } else {
        out << '-';
      }
    }
    out << ' ' << entries_[t.owner.address].size() << '\n';
  }
}

std::string ChordNetwork::snapshot() const {
  std::ostringstream out;
  write_snapshot(out);
  return out.str();
}

}  // namespace pmq

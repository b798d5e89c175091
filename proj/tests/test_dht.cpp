#include "doctest.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "pmq/analysis.hpp"
#include "pmq/dht.hpp"
#include "pmq/errors.hpp"

using namespace pmq;

namespace {

/// Ring-scan oracle: first node key at or after d, wrapping.
std::uint64_t scan_successor_key(const ChordNetwork& net, std::uint64_t d) {
  std::uint64_t best = 0;
  std::uint64_t best_dist = ~std::uint64_t{0};
  for (const auto& n : net.nodes()) {
    const std::uint64_t dist = (n.key + net.key_space() - d) % net.key_space();
    if (dist < best_dist) {
      best_dist = dist;
      best = n.key;
    }
  }
  return best;
}

/// Each hop at least halves the clockwise distance to the responsible node.
bool path_halves(const ChordNetwork& net, std::uint64_t d, const LookupOutcome& out) {
  const std::uint64_t target = net.node(net.successor_of_key(d)).key;
  for (std::size_t i = 0; i + 1 < out.path.size(); ++i) {
    const auto before = key_distance(Metric::kRing, net.node(out.path[i]).key, target, net.bits());
    const auto after = key_distance(Metric::kRing, net.node(out.path[i + 1]).key, target, net.bits());
    if (before >= 2 && 2 * after > before) return false;
    if (after >= before) return false;
  }
  return true;
}

/// Each hop drops the distance below the highest power of two not exceeding
/// the previous distance (one bit of improvement).
bool path_improves_bits(const ChordNetwork& net, std::uint64_t d, const LookupOutcome& out) {
  const std::uint64_t target = net.node(net.successor_of_key(d)).key;
  for (std::size_t i = 0; i + 1 < out.path.size(); ++i) {
    const auto before = key_distance(Metric::kRing, net.node(out.path[i]).key, target, net.bits());
    const auto after = key_distance(Metric::kRing, net.node(out.path[i + 1]).key, target, net.bits());
    if (after >= std::bit_floor(before)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("metrics") {
  CHECK(key_distance(Metric::kRing, 3, 5, 4) == 2);
  CHECK(key_distance(Metric::kRing, 5, 3, 4) == 14);
  CHECK(key_distance(Metric::kRing, 7, 7, 4) == 0);
  CHECK(key_distance(Metric::kXor, 0b1010, 0b0110, 4) == 0b1100);

  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const unsigned bits = 1 + static_cast<unsigned>(uniform_below(rng, 24));
    const std::uint64_t space = std::uint64_t{1} << bits;
    const auto a = uniform_below(rng, space), b = uniform_below(rng, space),
               c = uniform_below(rng, space);
    // XOR: symmetric, zero only on identity, unidirectional, triangle inequality.
    CHECK(key_distance(Metric::kXor, a, b, bits) == key_distance(Metric::kXor, b, a, bits));
    CHECK((key_distance(Metric::kXor, a, b, bits) == 0) == (a == b));
    CHECK(key_distance(Metric::kXor, a, c, bits) <=
          key_distance(Metric::kXor, a, b, bits) + key_distance(Metric::kXor, b, c, bits));
    // Ring: going there and back is a full turn.
    if (a != b) {
      CHECK(key_distance(Metric::kRing, a, b, bits) + key_distance(Metric::kRing, b, a, bits) ==
            space);
    }
  }
}

TEST_CASE("xor closest node is unique") {
  const auto net = ChordNetwork::build(40, 10, 3, FingerMode::kFull);
  for (std::uint64_t d = 0; d < 1024; ++d) {
    const Address best = closest_by_metric(net.nodes(), d, Metric::kXor, 10);
    const auto best_dist = key_distance(Metric::kXor, d, net.node(best).key, 10);
    int ties = 0;
    for (const auto& n : net.nodes()) ties += key_distance(Metric::kXor, d, n.key, 10) == best_dist;
    CHECK(ties == 1);
  }
}

TEST_CASE("two-node ring") {
  const auto net = ChordNetwork::build(2, 2, 11, FingerMode::kFull);
  CHECK(net.table(0).successor == 1);
  CHECK(net.table(1).successor == 0);
  CHECK(net.table(0).predecessor == 1);
}

TEST_CASE("build_network errors and determinism") {
  CHECK_THROWS_AS(ChordNetwork::build(5, 2, 1, FingerMode::kFull), RangeError);
  CHECK_THROWS_AS(ChordNetwork::build(1, 8, 1, FingerMode::kFull), RangeError);
  CHECK_THROWS_AS(ChordNetwork::build(4, 25, 1, FingerMode::kFull), RangeError);
  CHECK_THROWS_AS(ChordNetwork::from_keys({3, 3}, 4, FingerMode::kFull), RangeError);
  CHECK(ChordNetwork::build(50, 12, 9, FingerMode::kFull).snapshot() ==
        ChordNetwork::build(50, 12, 9, FingerMode::kFull).snapshot());
}

TEST_CASE("finger tables match a ring scan") {
  const auto net = ChordNetwork::build(64, 12, 21, FingerMode::kFull);
  for (const auto& n : net.nodes()) {
    const auto& t = net.table(n.address);
    REQUIRE(t.fingers.size() == 12);
    for (unsigned i = 1; i <= 12; ++i) {
      REQUIRE(t.fingers[i - 1].has_value());
      CHECK(net.node(*t.fingers[i - 1]).key == scan_successor_key(net, n.key + (1u << (i - 1))));
    }
    CHECK(net.node(t.successor).key == scan_successor_key(net, n.key + 1));
  }
  for (std::uint64_t d = 0; d < net.key_space(); d += 7) {
    CHECK(net.node(net.successor_of_key(d)).key == scan_successor_key(net, d));
    CHECK(net.successor_of_key(d) == closest_by_metric(net.nodes(), d, Metric::kRing, 12));
  }
}

TEST_CASE("entry-bound fingers follow stored entry counts") {
  auto net = ChordNetwork::build(32, 10, 4, FingerMode::kEntryBound);
  for (Address a = 0; a < net.size(); ++a) {
    for (const auto& f : net.table(a).fingers) CHECK_FALSE(f.has_value());
  }
  net.distribute_entries(200, 8);
  CHECK(net.entry_count() == 200);
  for (Address a = 0; a < net.size(); ++a) {
    const auto stored = net.entries_at(a).size();
    const auto& fingers = net.table(a).fingers;
    for (unsigned i = 1; i <= 10; ++i) CHECK(fingers[i - 1].has_value() == (stored >= i));
    for (const auto& e : net.entries_at(a)) CHECK(net.successor_of_key(e.data_key) == a);
  }
}

TEST_CASE("distribute_entries places entries node-uniformly") {
  // 64 nodes, 64000 entries: per-node count ~ Binomial(64000, 1/64).
  auto net = ChordNetwork::build(64, 16, 17, FingerMode::kEntryBound);
  const std::uint64_t total = 64000;
  net.distribute_entries(total, 23);
  const double mean = double(total) / 64;
  const double sigma = std::sqrt(total * (1.0 / 64) * (63.0 / 64));
  double grand = 0;
  for (Address a = 0; a < net.size(); ++a) {
    const double c = double(net.entries_at(a).size());
    grand += c;
    CHECK(std::abs(c - mean) <= 4 * sigma);  // 64 cells; 4 sigma keeps this from flaking
  }
  CHECK(grand == double(total));
}

TEST_CASE("few nodes lack m entries when N = C m n") {
  // C = 8, m = 16, n = 256: mean 128 entries per node.
  std::uint64_t short_nodes = 0, nodes = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto net = ChordNetwork::build(256, 16, seed, FingerMode::kEntryBound);
    net.distribute_entries(8 * 16 * 256, 1000 + seed);
    for (Address a = 0; a < net.size(); ++a) short_nodes += net.entries_at(a).size() < 16;
    nodes += net.size();
  }
  CHECK(double(short_nodes) / double(nodes) < 0.01);
}

TEST_CASE("ground truth") {
  auto net = ChordNetwork::build(8, 8, 2, FingerMode::kFull);
  for (std::uint64_t d = 0; d < 256; ++d) CHECK_FALSE(net.ground_truth(d));
  net.store(77, 1);
  CHECK(net.ground_truth(77));
  CHECK(net.lookup(77, 0).answer == Answer::kFound);
  CHECK_THROWS_AS(net.store(256, 1), RangeError);
}

TEST_CASE("lookup at the responsible node takes no hops") {
  auto net = ChordNetwork::build(16, 10, 6, FingerMode::kFull);
  const Address a = 5;
  net.store(net.node(a).key, 42);
  const auto out = net.lookup(net.node(a).key, a);
  CHECK(out.answer == Answer::kFound);
  CHECK(out.hops == 0);
  CHECK(out.correct);
  CHECK(out.path == std::vector<Address>{a});
}

TEST_CASE("full-mode lookups: exhaustive sweep") {
  auto net = ChordNetwork::build(64, 10, 77, FingerMode::kFull);
  net.distribute_entries(400, 78);
  for (std::uint64_t d = 0; d < net.key_space(); ++d) {
    for (Address s = 0; s < net.size(); ++s) {
      const auto out = net.lookup(d, s);
      CHECK(out.correct);
      CHECK_FALSE(out.error_case);
      CHECK(out.hops <= net.bits());
      CHECK(out.hops + 1 == out.path.size());
      CHECK(out.path.back() == net.successor_of_key(d));
      CHECK(path_halves(net, d, out));
      CHECK((out.answer == Answer::kFound) == net.ground_truth(d));
    }
  }
}

TEST_CASE("successor-only routing walks the ring") {
  // No entries: only successor/predecessor links. n - 1 <= 4m keeps the walk
  // under the hop cap.
  auto net = ChordNetwork::build(16, 8, 12, FingerMode::kEntryBound);
  for (std::uint64_t d = 0; d < 256; ++d) {
    for (Address s = 0; s < net.size(); ++s) {
      const auto walk = net.lookup(d, s, StallPolicy::kContinue);
      const Address target = net.successor_of_key(d);
      CHECK(walk.correct);
      // Clockwise walk, except that the predecessor link reaches one step back.
      const std::size_t clockwise = (target + net.size() - s) % net.size();
      CHECK(walk.hops == (clockwise == net.size() - 1 ? 1 : clockwise));
      CHECK(walk.hops <= net.size() - 1);
      CHECK(walk.error_case == !path_improves_bits(net, d, walk));
    }
  }
}

TEST_CASE("a stall decides absence") {
  // Node 0 knows only its neighbours; the responsible node for 200 is far away.
  auto net = ChordNetwork::from_keys({0, 1, 2, 100, 201, 250}, 8, FingerMode::kEntryBound);
  net.store(200, 5);
  const auto out = net.lookup(200, 0);
  CHECK(out.error_case);
  CHECK(out.answer == Answer::kNotFound);
  CHECK_FALSE(out.correct);
  CHECK(out.hops == 0);
  const auto cont = net.lookup(200, 0, StallPolicy::kContinue);
  CHECK(cont.error_case);
  CHECK(cont.correct);
}

TEST_CASE("hop cap turns a long walk into an error case") {
  std::vector<std::uint64_t> keys;
  for (std::uint64_t k = 0; k < 40; ++k) keys.push_back(k);
  auto net = ChordNetwork::from_keys(keys, 6, FingerMode::kEntryBound);  // cap 24
  const auto out = net.lookup(38, 0, StallPolicy::kContinue);
  CHECK(out.error_case);
  CHECK(out.hops == net.hop_cap());
  CHECK(out.answer == Answer::kNotFound);
}

TEST_CASE("natural query protocol") {
  auto net = ChordNetwork::build(256, 12, 5, FingerMode::kFull);
  net.distribute_entries(12 * 256, 6);
  Rng rng(7);

  SUBCASE("w = 0 is a single lookup") {
    const auto r = net.natural_query(QueryPattern::parse("101100111000"), 3);
    CHECK(r.per_key_hops.size() == 1);
    CHECK(r.total_hops <= 12);
  }

  SUBCASE("expansions resolve in protocol order with bounded hops") {
    for (int trial = 0; trial < 300; ++trial) {
      const unsigned w = static_cast<unsigned>(uniform_below(rng, 7));
      const auto config = sample_configuration(12, w, rng);
      const auto pattern = QueryPattern::from_configuration(config, 2, uniform_below(rng, 4096));
      const auto start = static_cast<Address>(uniform_below(rng, net.size()));
      const auto r = net.natural_query(pattern, start);
      REQUIRE(r.per_key_hops.size() == (1u << w));
      CHECK(r.all_correct());
      CHECK_FALSE(r.error_case);
      CHECK(r.per_key_hops[0] <= 12);
      for (std::size_t i = 1; i < r.per_key_hops.size(); ++i) {
        CHECK(r.per_key_hops[i] <= 2 * r.flipped_position[i]);
      }
      CHECK(BigInt(r.total_hops) <= s_hat(12, w, config));

      const Trie members = [&] {
        Trie t(2, 12);
        for (std::uint64_t d = 0; d < 4096; ++d) {
          if (net.ground_truth(d)) t.insert(d);
        }
        return t;
      }();
      CHECK(r.matches == oracle_query(members, pattern));
    }
  }

  SUBCASE("shape checks") {
    CHECK_THROWS_AS(net.natural_query(QueryPattern::parse("1*"), 0), ShapeError);
    CHECK_THROWS_AS(net.natural_query(QueryPattern::parse("2*0000000000"), 0), ShapeError);
    CHECK_THROWS_AS(net.natural_query(QueryPattern::parse("************"), 0,
                                      StallPolicy::kDecideAbsent, 1024),
                    SizeError);
  }
}

TEST_CASE("snapshot format") {
  auto net = ChordNetwork::from_keys({1, 5, 9}, 4, FingerMode::kEntryBound);
  net.store(4, 0);
  net.store(5, 0);
  CHECK(net.snapshot() ==
        "# chord-snapshot bits=4 nodes=3 mode=entry-bound entries=2\n"
        "1 5 9 -,-,-,- 0\n"
        "5 9 1 9,9,-,- 2\n"
        "9 1 5 -,-,-,- 0\n");
}

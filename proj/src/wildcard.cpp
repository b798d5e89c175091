#include "pmq/wildcard.hpp"

#include <algorithm>
#include <string>

#include "pmq/errors.hpp"

namespace pmq {

Configuration::Configuration(std::vector<unsigned> positions, unsigned length)
    : length_(length), positions_(std::move(positions)) {
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const unsigned z = positions_[i];
    if (z < 1 || z > length_) {
      throw RangeError("wildcard position " + std::to_string(z) +
                       " outside [1, " + std::to_string(length_) + "]");
    }
    if (i > 0 && positions_[i - 1] >= z) {
      throw RangeError("wildcard positions must be strictly increasing");
    }
  }
}

bool Configuration::has_wildcard_at(unsigned pos) const {
  return std::binary_search(positions_.begin(), positions_.end(), pos);
}

std::string Configuration::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(positions_[i]);
  }
  return out;
}

namespace {

Configuration configuration_of(const std::vector<QueryPattern::Symbol>& letters) {
  std::vector<unsigned> zs;
  const auto m = static_cast<unsigned>(letters.size());
  for (unsigned pos = 1; pos <= m; ++pos) {
    if (!letters[m - pos]) zs.push_back(pos);
  }
  return Configuration(std::move(zs), m);
}

char letter_char(unsigned letter) {
  return static_cast<char>(letter < 10 ? '0' + letter : 'a' + (letter - 10));
}

}  // namespace

QueryPattern::QueryPattern(std::vector<Symbol> letters)
    : letters_(std::move(letters)), configuration_(configuration_of(letters_)) {
  if (letters_.empty()) throw ShapeError("query pattern must have length >= 1");
}

QueryPattern QueryPattern::parse(std::string_view text) {
  std::vector<Symbol> letters;
  letters.reserve(text.size());
  for (const char c : text) {
    if (c == '*') {
      letters.emplace_back(std::nullopt);
    } else if (c >= '0' && c <= '9') {
      letters.emplace_back(static_cast<unsigned>(c - '0'));
    } else if (c >= 'a' && c <= 'z') {
      letters.emplace_back(static_cast<unsigned>(c - 'a' + 10));
    } else {
      throw ShapeError(std::string("invalid pattern character '") + c + "'");
    }
  }
  return QueryPattern(std::move(letters));
}

QueryPattern QueryPattern::from_configuration(const Configuration& config,
                                              unsigned arity, Key fixed) {
  const unsigned m = config.length();
  std::vector<Symbol> letters(m);
  for (unsigned pos = 1; pos <= m; ++pos) {
    if (!config.has_wildcard_at(pos)) letters[m - pos] = letter_at(fixed, arity, pos);
  }
  return QueryPattern(std::move(letters));
}

unsigned QueryPattern::min_arity() const {
  unsigned k = 2;
  for (const auto& s : letters_) {
    if (s) k = std::max(k, *s + 1);
  }
  return k;
}

std::string QueryPattern::to_string() const {
  std::string out;
  out.reserve(letters_.size());
  for (const auto& s : letters_) out += s ? letter_char(*s) : '*';
  return out;
}

namespace {

/// Shape checks shared by the search and the oracle; returns k^w.
std::uint64_t validate(const Trie& trie, const QueryPattern& pattern,
                       std::uint64_t expansion_limit) {
  if (pattern.length() != trie.depth()) {
    throw ShapeError("pattern length " + std::to_string(pattern.length()) +
                     " != trie depth " + std::to_string(trie.depth()));
  }
  if (pattern.min_arity() > trie.arity()) {
    throw ShapeError("pattern letter exceeds trie arity " +
                     std::to_string(trie.arity()));
  }
  const auto expansions = checked_power(trie.arity(), pattern.wildcard_count());
  if (!expansions || *expansions > expansion_limit) {
    throw SizeError("k^w exceeds expansion limit " + std::to_string(expansion_limit));
  }
  return *expansions;
}

}  // namespace

QueryResult algorithm_query(const Trie& trie, const QueryPattern& pattern,
                            std::uint64_t expansion_limit) {
  const std::uint64_t expansions = validate(trie, pattern, expansion_limit);
  const unsigned k = trie.arity();
  const unsigned m = trie.depth();
  const Configuration& config = pattern.configuration();
  const unsigned w = config.wildcard_count();

  // wildcard_index[pos] = j - 1 for pos = z_j, or -1 for a fixed letter.
  std::vector<int> wildcard_index(m + 1, -1);
  for (unsigned j = 1; j <= w; ++j) wildcard_index[config.z(j)] = static_cast<int>(j - 1);
  std::vector<std::uint64_t> block(w + 1, 1);  // block[j] = k^j
  for (unsigned j = 1; j <= w; ++j) block[j] = block[j - 1] * k;

  QueryResult result;
  result.per_key_steps.assign(expansions, 0);

  std::vector<unsigned> value(w, 0);
  std::vector<Trie::NodeIndex> path{Trie::kRoot};  // path[d] = node at depth d
  path.reserve(m + 1);
  std::uint64_t expansion = 0;

  auto letter = [&](unsigned pos) {
    const int j = wildcard_index[pos];
    return j < 0 ? *pattern.at(pos) : value[j];
  };

  for (;;) {
    // Search down from the current depth.
    unsigned miss_pos = 0;
    while (path.size() <= m) {
      const unsigned pos = m - static_cast<unsigned>(path.size() - 1);
      const auto next = trie.child(path.back(), letter(pos));
      if (!next) {
        miss_pos = pos;
        break;
      }
      path.push_back(*next);
      ++result.steps;
      ++result.per_key_steps[expansion];
    }

    unsigned floor_pos;
    if (miss_pos == 0) {
      Key key = 0;
      for (unsigned pos = m; pos >= 1; --pos) key = key * k + letter(pos);
      result.matches.push_back(key);
      result.keys_decided += 1;
      floor_pos = 1;
    } else {
      // Every expansion sharing the letters at positions >= miss_pos is out.
      unsigned below = 0;
      while (below < w && config.z(below + 1) < miss_pos) ++below;
      result.keys_decided += block[below];
      floor_pos = miss_pos;
    }

    // Closest unfinished wildcard at or above floor_pos.
    unsigned j = 0;
    while (j < w && (config.z(j + 1) < floor_pos || value[j] + 1 == k)) ++j;
    if (j == w) break;
    ++value[j];
    std::fill(value.begin(), value.begin() + j, 0u);
    expansion = 0;
    for (unsigned i = w; i-- > 0;) expansion = expansion * k + value[i];

    // Back up to the node the edge for z_j leaves from.
    const std::size_t target_depth = m - config.z(j + 1);
    const std::uint64_t up = path.size() - 1 - target_depth;
    result.steps += up;
    result.per_key_steps[expansion] += up;
    path.resize(target_depth + 1);
  }
  return result;
}

std::vector<Key> oracle_query(const Trie& trie, const QueryPattern& pattern,
                              std::uint64_t expansion_limit) {
  const std::uint64_t expansions = validate(trie, pattern, expansion_limit);
  const unsigned k = trie.arity();
  const unsigned m = trie.depth();

  std::vector<std::uint64_t> weight(m + 1, 1);  // weight[pos] = k^(pos-1)
  for (unsigned pos = 2; pos <= m; ++pos) weight[pos] = weight[pos - 1] * k;

  Key base = 0;
  for (unsigned pos = 1; pos <= m; ++pos) {
    if (const auto& s = pattern.at(pos)) base += *s * weight[pos];
  }

  std::vector<Key> out;
  const auto& zs = pattern.configuration().positions();
  for (std::uint64_t e = 0; e < expansions; ++e) {
    Key key = base;
    std::uint64_t digits = e;
    for (const unsigned z : zs) {
      key += (digits % k) * weight[z];
      digits /= k;
    }
    if (trie.contains(key)) out.push_back(key);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Configuration sample_configuration(unsigned length, unsigned wildcards, Rng& rng) {
  if (wildcards > length) {
    throw RangeError("w = " + std::to_string(wildcards) + " exceeds m = " +
                     std::to_string(length));
  }
  std::vector<unsigned> zs;
  zs.reserve(wildcards);
  for (const auto v : sample_distinct(rng, length, wildcards)) {
    zs.push_back(static_cast<unsigned>(v) + 1);
  }
  return Configuration(std::move(zs), length);
}

Configuration sample_configuration(unsigned length, unsigned wildcards,
                                   std::uint64_t seed) {
  Rng rng(seed);
  return sample_configuration(length, wildcards, rng);
}

std::vector<Configuration> enumerate_configurations(unsigned length,
                                                    unsigned wildcards,
                                                    std::uint64_t limit) {
  if (wildcards > length) {
    throw RangeError("w = " + std::to_string(wildcards) + " exceeds m = " +
                     std::to_string(length));
  }
  // C(m, w) with early exit once past the limit.
  std::uint64_t count = 1;
  for (unsigned i = 1; i <= wildcards; ++i) {
    count = count * (length - wildcards + i) / i;
    if (count > limit) {
      throw SizeError("C(" + std::to_string(length) + ", " +
                      std::to_string(wildcards) + ") exceeds limit " +
                      std::to_string(limit));
    }
  }

  std::vector<Configuration> out;
  out.reserve(count);
  std::vector<unsigned> zs(wildcards);
  for (unsigned i = 0; i < wildcards; ++i) zs[i] = i + 1;
  for (;;) {
    out.emplace_back(zs, length);
    // Advance the rightmost slot that still has room.
    int i = static_cast<int>(wildcards) - 1;
    while (i >= 0 && zs[i] == length - wildcards + static_cast<unsigned>(i) + 1) --i;
    if (i < 0) break;
    ++zs[i];
    for (unsigned t = static_cast<unsigned>(i) + 1; t < wildcards; ++t) zs[t] = zs[t - 1] + 1;
  }
  return out;
}

}  // namespace pmq

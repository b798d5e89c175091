#include "pmq/analysis.hpp"

#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>

#include "pmq/errors.hpp"

namespace pmq {

namespace mp = boost::multiprecision;

std::string to_string(const Rational& r) {
  const BigInt num = numerator_of(r);
  const BigInt den = denominator_of(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

BigInt numerator_of(const Rational& r) { return mp::numerator(r); }
BigInt denominator_of(const Rational& r) { return mp::denominator(r); }
double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

class PascalTable {
 public:
  BigInt get(long n, long r) {
    if (n < 0 || r < 0 || r > n) return 0;
    {
      std::shared_lock lock(mutex_);
      if (static_cast<std::size_t>(n) < rows_.size()) return rows_[n][r];
    }
    std::unique_lock lock(mutex_);
    while (rows_.size() <= static_cast<std::size_t>(n)) {
      std::vector<BigInt> row(rows_.size() + 1, BigInt(1));
      if (!rows_.empty()) {
        const auto& prev = rows_.back();
        for (std::size_t i = 1; i + 1 < row.size(); ++i) row[i] = prev[i - 1] + prev[i];
      }
      rows_.push_back(std::move(row));
    }
    return rows_[n][r];
  }

 private:
  std::shared_mutex mutex_;
  std::vector<std::vector<BigInt>> rows_;
};

PascalTable& pascal() {
  static PascalTable table;
  return table;
}

BigInt power(unsigned base, unsigned exp) { return mp::pow(BigInt(base), exp); }

void check_shape(unsigned length, unsigned wildcards, unsigned arity) {
  if (length < 1) throw RangeError("m must be at least 1");
  if (wildcards > length) throw RangeError("w exceeds m");
  if (arity < 2) throw RangeError("k must be at least 2");
}

}  // namespace

BigInt binomial(long n, long r) { return pascal().get(n, r); }

BigInt s_hat(unsigned length, unsigned wildcards, const Configuration& config,
             unsigned arity) {
  check_shape(length, wildcards, arity);
  if (config.length() != length || config.wildcard_count() != wildcards) {
    throw RangeError("configuration " + config.to_string() + " is not a (m=" +
                     std::to_string(length) + ", w=" + std::to_string(wildcards) +
                     ") configuration");
  }
  BigInt total = length;
  for (unsigned j = 1; j <= wildcards; ++j) {
    total += 2 * power(arity, wildcards - j) * (arity - 1) * config.z(j);
  }
  return total;
}

Rational position_law(unsigned length, unsigned wildcards, unsigned z, unsigned j) {
  if (j < 1 || j > wildcards || wildcards > length || z < 1 || z > length) {
    return Rational(0);
  }
  return Rational(binomial(long(z) - 1, long(j) - 1) *
                      binomial(long(length) - z, long(wildcards) - j),
                  binomial(length, wildcards));
}

Rational average_bound(unsigned length, unsigned wildcards, unsigned arity) {
  check_shape(length, wildcards, arity);
  const unsigned m = length;
  const unsigned w = wildcards;
  if (w == 0) return Rational(m);
  if (arity == 2) {
    return Rational(BigInt(m + 1), BigInt(w + 1)) *
               Rational(power(2, w + 2) - 2 * w - 4) +
           m;
  }
  const unsigned k = arity;
  const BigInt inner = power(k, w + 1) - BigInt(w + 1) * k + w;
  return m + Rational(BigInt(2) * (m + 1), BigInt(w + 1)) * Rational(inner, BigInt(k - 1));
}

Rational s_mw_sum(unsigned length, unsigned wildcards, unsigned arity) {
  check_shape(length, wildcards, arity);
  const unsigned m = length;
  const unsigned w = wildcards;
  const BigInt configs = binomial(m, w);
  BigInt numerator = 0;
  for (unsigned z = 1; z <= m; ++z) {
    for (unsigned j = 1; j <= w; ++j) {
      numerator += BigInt(2) * j * power(arity, w - j) * (arity - 1) *
                   binomial(z, j) * binomial(long(m) - z, long(w) - j);
    }
  }
  return m + Rational(numerator, configs);
}

Rational mean_s_hat(unsigned length, unsigned wildcards, unsigned arity) {
  check_shape(length, wildcards, arity);
  BigInt total = 0;
  std::uint64_t count = 0;
  for (const auto& config : enumerate_configurations(length, wildcards)) {
    total += s_hat(length, wildcards, config, arity);
    ++count;
  }
  return Rational(total, BigInt(count));
}

IdentityCheck binomial_identity_check(unsigned length, unsigned wildcards, unsigned j) {
  if (j < 1 || j > wildcards || wildcards > length) {
    throw RangeError("identity check needs 1 <= j <= w <= m");
  }
  IdentityCheck out;
  for (unsigned z = 0; z <= length; ++z) {
    out.lhs += binomial(z, j) * binomial(long(length) - z, long(wildcards) - j);
  }
  out.rhs = binomial(long(length) + 1, long(wildcards) + 1);
  return out;
}

Rational expected_steps_by_enumeration(unsigned length, unsigned wildcards,
                                       unsigned arity) {
  check_shape(length, wildcards, arity);
  const Trie trie = complete_trie(arity, length);
  BigInt total = 0;
  std::uint64_t count = 0;
  for (const auto& config : enumerate_configurations(length, wildcards)) {
    const auto pattern = QueryPattern::from_configuration(config, arity, 0);
    total += algorithm_query(trie, pattern).steps;
    ++count;
  }
  return Rational(total, BigInt(count));
}

ExactBound exact_bound(unsigned length, unsigned wildcards, unsigned arity) {
  ExactBound out;
  out.length = length;
  out.wildcards = wildcards;
  out.arity = arity;
  for (auto& config : enumerate_configurations(length, wildcards)) {
    BigInt cost = s_hat(length, wildcards, config, arity);
    out.s_hat_per_config.emplace_back(std::move(config), std::move(cost));
  }
  out.s_mw = wildcards == 0 ? Rational(length) : s_mw_sum(length, wildcards, arity);
  out.b = average_bound(length, wildcards, arity);
  return out;
}

}  // namespace pmq

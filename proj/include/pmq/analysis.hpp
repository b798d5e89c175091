#pragma once

#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pmq/wildcard.hpp"

namespace pmq {

using BigInt = boost::multiprecision::cpp_int;
/// Always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// "p" or "p/q".
std::string to_string(const Rational& r);
BigInt numerator_of(const Rational& r);
BigInt denominator_of(const Rational& r);
double to_double(const Rational& r);

/// C(n, r); zero when r < 0 or r > n. Memoized Pascal triangle, shared across
/// threads (concurrent readers, serialized growth).
BigInt binomial(long n, long r);

/// Per-configuration cost m + sum_j 2 k^(w-j) (k-1) z_j of the backtracking
/// search; equals m + sum_j 2^(w-j+1) z_j for k = 2.
BigInt s_hat(unsigned length, unsigned wildcards, const Configuration& config,
             unsigned arity = 2);

/// P(z_j = z) under uniform configurations: C(z-1, j-1) C(m-z, w-j) / C(m, w).
/// Zero outside the support.
Rational position_law(unsigned length, unsigned wildcards, unsigned z, unsigned j);

/// Closed-form average of s_hat over uniform configurations:
///   k = 2: (m+1)/(w+1) (2^(w+2) - 2w - 4) + m
///   k > 2: m + 2(m+1)/(w+1) (k^(w+1) - (w+1)k + w)/(k-1)
/// Defined as m for w = 0.
Rational average_bound(unsigned length, unsigned wildcards, unsigned arity = 2);

/// Hypergeometric double sum
///   m + sum_{z=1..m, j=1..w} 2 j k^(w-j) (k-1) C(z,j) C(m-z,w-j) / C(m,w)
/// evaluated term by term (k = 2 gives the j 2^(w-j+1) weights).
Rational s_mw_sum(unsigned length, unsigned wildcards, unsigned arity = 2);

/// Mean of s_hat over every configuration, by enumeration.
Rational mean_s_hat(unsigned length, unsigned wildcards, unsigned arity = 2);

struct IdentityCheck {
  BigInt lhs;  // sum_{z=0..m} C(z, j) C(m-z, w-j)
  BigInt rhs;  // C(m+1, w+1)
  bool holds() const { return lhs == rhs; }
};

IdentityCheck binomial_identity_check(unsigned length, unsigned wildcards, unsigned j);

/// Runs algorithm_query on complete_trie(k, m) for every configuration (fixed
/// letters all zero) and returns the exact mean step count.
Rational expected_steps_by_enumeration(unsigned length, unsigned wildcards,
                                       unsigned arity = 2);

struct ExactBound {
  unsigned length = 0;
  unsigned wildcards = 0;
  unsigned arity = 2;
  std::vector<std::pair<Configuration, BigInt>> s_hat_per_config;
  Rational s_mw;
  Rational b;
};

ExactBound exact_bound(unsigned length, unsigned wildcards, unsigned arity = 2);

}  // namespace pmq

#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lal {

/// Natural log of the binomial coefficient C(b, r), extended so that
/// C(b, r) = 0 (log = -infinity) whenever r < 0, r > b, or b < 0.
/// Exact table lookup for b <= 20, log-gamma above.
double log_binomial(long long b, long long r);

/// Probability that the i-th smallest of m out-of-sample losses falls
/// between the j-th and (j+1)-th calibration order statistics, under
/// exchangeability of all n + m losses:
///
///   C(n-j+m-i, n-j) * C(j+i-1, j) / C(n+m, m)
///
/// j = 0 and j = n address the support sentinels below the minimum and
/// above the maximum calibration loss. Requires 1 <= i <= m, 0 <= j <= n.
double order_pmf(long long n, long long m, long long i, long long j);

/// Tail probability a(k) that the q-th smallest of m out-of-sample losses
/// exceeds the k-th calibration order statistic: the suffix sum of the
/// order_pmf terms for j = k..n+1 (the j = n+1 term vanishes by the
/// r < 0 convention, so a(n+1) = 0 exactly). Requires 1 <= k <= n+1,
/// 1 <= q <= m.
double tail_a(long long k, long long n, long long m, long long q);

/// a(k) for every k = 1..n+1 (index k-1), accumulated as suffix sums from
/// k = n+1 downward. All terms are nonnegative, so there is no cancellation.
std::vector<double> tail_a_all(long long n, long long m, long long q);

/// P[X <= k] for X ~ Binomial(n, beta), accumulated from a log-space pmf
/// recurrence. k < 0 gives 0, k >= n gives 1. Requires n >= 1, beta in (0,1].
double binomial_cdf(long long k, long long n, double beta);

/// Smallest k in 0..n with binomial_cdf(k, n, beta) >= p.
/// Requires p in [0,1], n >= 1, beta in (0,1].
long long binomial_quantile(double p, long long n, double beta);

/// Exact rational with arbitrary-precision integer numerator/denominator.
/// Stored reduced (gcd 1, denominator positive).
struct ExactFraction {
  boost::multiprecision::cpp_int num{0};
  boost::multiprecision::cpp_int den{1};

  /// Reduce in place to lowest terms.
  void reduce();

  /// Nearest double.
  double value() const;

  friend bool operator==(const ExactFraction&, const ExactFraction&) = default;
};

/// Problem-size cap for the exact big-integer tail: n + m must not exceed it.
inline constexpr long long kExactTailCap = 500;

/// Exact rational value of a(k) via arbitrary-precision binomials.
/// Verification twin of tail_a; throws CapExceeded when n + m > kExactTailCap.
ExactFraction exact_tail_a(long long k, long long n, long long m, long long q);

/// Exact C(b, r) as a big integer (0 outside 0 <= r <= b).
boost::multiprecision::cpp_int exact_binomial(long long b, long long r);

}  // namespace lal

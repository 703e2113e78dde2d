#include "lal/combinatorics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lal/errors.hpp"

namespace lal {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// C(b, r) for b <= kSmallMax, exact in 64-bit (C(20,10) = 184756).
constexpr int kSmallMax = 20;

const std::array<std::array<std::uint64_t, kSmallMax + 1>, kSmallMax + 1>&
pascal_table() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kSmallMax + 1>, kSmallMax + 1> t{};
    for (int b = 0; b <= kSmallMax; ++b) {
      t[b][0] = 1;
      for (int r = 1; r <= b; ++r)
        t[b][r] = t[b - 1][r - 1] + (r <= b - 1 ? t[b - 1][r] : 0);
    }
    return t;
  }();
  return table;
}

// Suffix accumulator for sums of exp(log-term) with a running maximum, so
// tiny suffixes keep full relative precision and large ones cannot overflow.
struct TailAccumulator {
  double log_max = kNegInf;
  double scaled_sum = 0.0;

  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term <= log_max) {
      scaled_sum += std::exp(log_term - log_max);
    } else {
      scaled_sum = scaled_sum * std::exp(log_max - log_term) + 1.0;
      log_max = log_term;
    }
  }

  double value() const {
    if (log_max == kNegInf) return 0.0;
    return std::min(1.0, std::exp(log_max) * scaled_sum);
  }
};

double log_tail_term(long long n, long long m, long long q, long long j,
                     double log_denom) {
  const double t =
      log_binomial(n - j + m - q, n - j) + log_binomial(j + q - 1, j);
  return t == kNegInf ? kNegInf : t - log_denom;
}

void check_tail_domain(long long k, long long n, long long m, long long q) {
  if (n < 1) throw std::domain_error("tail_a: n must be >= 1");
  if (m < 1) throw std::domain_error("tail_a: m must be >= 1");
  if (q < 1 || q > m) throw std::domain_error("tail_a: q must be in 1..m");
  if (k < 1 || k > n + 1)
    throw std::domain_error("tail_a: k must be in 1..n+1");
}

}  // namespace

double log_binomial(long long b, long long r) {
  if (r < 0 || b < 0 || r > b) return kNegInf;
  if (r == 0 || r == b) return 0.0;
  if (b <= kSmallMax)
    return std::log(static_cast<double>(pascal_table()[b][r]));
  if (r == 1 || r == b - 1) return std::log(static_cast<double>(b));
  return std::lgamma(static_cast<double>(b) + 1.0) -
         std::lgamma(static_cast<double>(r) + 1.0) -
         std::lgamma(static_cast<double>(b - r) + 1.0);
}

double order_pmf(long long n, long long m, long long i, long long j) {
  if (n < 1) throw std::domain_error("order_pmf: n must be >= 1");
  if (m < 1) throw std::domain_error("order_pmf: m must be >= 1");
  if (i < 1 || i > m) throw std::domain_error("order_pmf: i must be in 1..m");
  if (j < 0 || j > n) throw std::domain_error("order_pmf: j must be in 0..n");
  const double t = log_binomial(n - j + m - i, n - j) +
                   log_binomial(j + i - 1, j) - log_binomial(n + m, m);
  return std::clamp(std::exp(t), 0.0, 1.0);
}

double tail_a(long long k, long long n, long long m, long long q) {
  check_tail_domain(k, n, m, q);
  // Single out-of-sample draw: the suffix sum collapses to (n+1-k)/(n+1).
  // Evaluate it directly so boundary comparisons against alpha see the
  // correctly rounded value.
  if (m == 1) {
    if (k == n + 1) return 0.0;
    return static_cast<double>(n + 1 - k) / static_cast<double>(n + 1);
  }
  const double log_denom = log_binomial(n + m, m);
  TailAccumulator acc;
  for (long long j = n; j >= k; --j) acc.add(log_tail_term(n, m, q, j, log_denom));
  return acc.value();
}

std::vector<double> tail_a_all(long long n, long long m, long long q) {
  check_tail_domain(1, n, m, q);
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  out[static_cast<std::size_t>(n)] = 0.0;  // a(n+1): empty suffix
  if (m == 1) {
    for (long long k = n; k >= 1; --k)
      out[static_cast<std::size_t>(k - 1)] =
          static_cast<double>(n + 1 - k) / static_cast<double>(n + 1);
    return out;
  }
  const double log_denom = log_binomial(n + m, m);
  TailAccumulator acc;
  for (long long k = n; k >= 1; --k) {
    acc.add(log_tail_term(n, m, q, k, log_denom));
    out[static_cast<std::size_t>(k - 1)] = acc.value();
  }
  return out;
}

double binomial_cdf(long long k, long long n, double beta) {
  if (n < 1) throw std::domain_error("binomial_cdf: n must be >= 1");
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::domain_error("binomial_cdf: beta must be in (0,1]");
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (beta == 1.0) return 0.0;  // all mass at n, and k < n here
  const double log_odds = std::log(beta) - std::log1p(-beta);
  double log_pmf = static_cast<double>(n) * std::log1p(-beta);
  double cdf = std::exp(log_pmf);
  for (long long j = 0; j < k; ++j) {
    log_pmf += std::log(static_cast<double>(n - j)) -
               std::log(static_cast<double>(j + 1)) + log_odds;
    cdf += std::exp(log_pmf);
  }
  return std::min(1.0, cdf);
}

long long binomial_quantile(double p, long long n, double beta) {
  if (n < 1) throw std::domain_error("binomial_quantile: n must be >= 1");
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::domain_error("binomial_quantile: beta must be in (0,1]");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binomial_quantile: p must be in [0,1]");
  if (beta == 1.0) return p > 0.0 ? n : 0;  // all mass at n
  const double log_odds = std::log(beta) - std::log1p(-beta);
  double log_pmf = static_cast<double>(n) * std::log1p(-beta);
  double cdf = std::exp(log_pmf);
  long long k = 0;
  while (cdf < p && k < n) {
    log_pmf += std::log(static_cast<double>(n - k)) -
               std::log(static_cast<double>(k + 1)) + log_odds;
    cdf += std::exp(log_pmf);
    ++k;
  }
  return k;
}

void ExactFraction::reduce() {
  using boost::multiprecision::cpp_int;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  cpp_int g = boost::multiprecision::gcd(num < 0 ? cpp_int(-num) : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
}

double ExactFraction::value() const {
  return num.convert_to<double>() / den.convert_to<double>();
}

boost::multiprecision::cpp_int exact_binomial(long long b, long long r) {
  using boost::multiprecision::cpp_int;
  if (r < 0 || b < 0 || r > b) return 0;
  r = std::min(r, b - r);
  cpp_int result = 1;
  for (long long i = 1; i <= r; ++i) {
    result *= b - r + i;
    result /= i;  // exact: C(b-r+i, i) is an integer
  }
  return result;
}

ExactFraction exact_tail_a(long long k, long long n, long long m, long long q) {
  check_tail_domain(k, n, m, q);
  if (n + m > kExactTailCap)
    throw CapExceeded("exact_tail_a: n + m exceeds the cap of " +
                      std::to_string(kExactTailCap));
  ExactFraction f;
  for (long long j = k; j <= n + 1; ++j)
    f.num += exact_binomial(n - j + m - q, n - j) * exact_binomial(j + q - 1, j);
  f.den = exact_binomial(n + m, m);
  f.reduce();
  return f;
}

}  // namespace lal

#include "lal/lal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lal/combinatorics.hpp"

namespace lal {

namespace {

// Integer ceiling that snaps products lying within 1e-9 of an integer.
long long guarded_ceil(double t) {
  const double r = std::round(t);
  if (std::abs(t - r) < 1e-9) return static_cast<long long>(r);
  return static_cast<long long>(std::ceil(t));
}

}  // namespace

BatchSize::BatchSize(long long m) : m_(m) {
  if (m < 1) throw std::domain_error("BatchSize: m must be >= 1");
}

long long BatchSize::value() const {
  if (infinite_)
    throw std::domain_error("BatchSize: infinite batch has no finite value");
  return m_;
}

void validate_query(const LalQuery& query) {
  if (!(query.beta > 0.0 && query.beta <= 1.0))
    throw std::domain_error("query: beta must be in (0,1]");
  if (!(query.alpha > 0.0 && query.alpha < 1.0))
    throw std::domain_error("query: alpha must be in (0,1)");
}

long long ceil_fraction(long long m, double beta) {
  if (m < 1) throw std::domain_error("ceil_fraction: m must be >= 1");
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::domain_error("ceil_fraction: beta must be in (0,1]");
  const long long q = guarded_ceil(static_cast<double>(m) * beta);
  return std::clamp(q, 1LL, m);
}

long long k_star_finite(long long n, long long m, double beta, double alpha) {
  if (n < 1) throw std::domain_error("k_star_finite: n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("k_star_finite: alpha must be in (0,1)");
  const long long q = ceil_fraction(m, beta);
  const std::vector<double> a = tail_a_all(n, m, q);
  for (long long k = 1; k <= n + 1; ++k)
    if (a[static_cast<std::size_t>(k - 1)] <= alpha) return k;
  return n + 1;  // unreachable: a(n+1) = 0
}

long long k_star_single(long long n, double alpha) {
  if (n < 1) throw std::domain_error("k_star_single: n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("k_star_single: alpha must be in (0,1)");
  const long long k = guarded_ceil(static_cast<double>(n + 1) * (1.0 - alpha));
  return std::clamp(k, 1LL, n + 1);
}

long long k_star_infinite(long long n, double beta, double alpha) {
  if (n < 1) throw std::domain_error("k_star_infinite: n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("k_star_infinite: alpha must be in (0,1)");
  return std::min(n + 1, 1 + binomial_quantile(1.0 - alpha, n, beta));
}

LalOutcome lal(const CalibrationSample& sample, const LalQuery& query) {
  validate_query(query);
  const long long n = sample.size();
  LalOutcome out;
  out.conservative_under_ties = sample.has_ties();
  if (query.m.is_infinite()) {
    out.k_star = k_star_infinite(n, query.beta, query.alpha);
    out.exact_coverage = binomial_cdf(out.k_star - 1, n, query.beta);
  } else {
    const long long m = query.m.value();
    const long long q = ceil_fraction(m, query.beta);
    out.k_star = m == 1 ? k_star_single(n, query.alpha)
                        : k_star_finite(n, m, query.beta, query.alpha);
    out.exact_coverage = 1.0 - tail_a(out.k_star, n, m, q);
    out.ordinal = q;
  }
  out.limit = sample.order_statistic(out.k_star);
  return out;
}

}  // namespace lal

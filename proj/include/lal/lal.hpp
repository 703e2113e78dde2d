#pragma once

#include <optional>

#include "lal/sample.hpp"

namespace lal {

/// Out-of-sample batch size: a positive integer or infinite.
class BatchSize {
 public:
  static BatchSize finite(long long m) { return BatchSize(m); }
  static BatchSize infinite() { return BatchSize(); }

  bool is_infinite() const { return infinite_; }

  long long value() const;

  friend bool operator==(const BatchSize&, const BatchSize&) = default;

 private:
  BatchSize() : infinite_(true) {}
  explicit BatchSize(long long m);

  bool infinite_ = false;
  long long m_ = 1;
};

/// The (m, beta, alpha) triple of a limit query: bound at least a fraction
/// beta of m out-of-sample losses with probability at least 1 - alpha.
struct LalQuery {
  BatchSize m = BatchSize::finite(1);
  double beta = 1.0;   // in (0,1]
  double alpha = 0.1;  // in (0,1)
};

/// Throws std::domain_error unless beta in (0,1] and alpha in (0,1).
void validate_query(const LalQuery& query);

/// Result of a limit query against a calibration sample.
struct LalOutcome {
  long long k_star = 1;          // chosen calibration order statistic, 1..n+1
  double limit = 0.0;            // the level-alpha limit; may be +infinity
  double exact_coverage = 0.0;   // 1 - a(k_star); exact only without ties
  std::optional<long long> ordinal;  // ceil(m*beta); finite m only
  bool conservative_under_ties = false;
};

/// ceil(m * beta) with a snap-to-integer guard: products within 1e-9 of an
/// integer are taken as that integer, absorbing float artifacts such as
/// 10 * 0.3. Result is clamped to 1..m.
long long ceil_fraction(long long m, double beta);

/// General path: min { k in 1..n+1 : a(k) <= alpha } with q = ceil(m*beta).
/// The comparison is a strict floating-point <=, no slack. Always exists
/// because a(n+1) = 0.
long long k_star_finite(long long n, long long m, double beta, double alpha);

/// Single-draw fast path: ceil((n+1)(1-alpha)) under the same snap-to-integer
/// guard as ceil_fraction, clamped to 1..n+1.
long long k_star_single(long long n, double alpha);

/// Infinite-batch path: 1 + binomial_quantile(1-alpha; n, beta), at most n+1.
long long k_star_infinite(long long n, double beta, double alpha);

/// Computes the level-alpha limit for the query, dispatching on m:
/// the general finite-m path, the m = 1 fast path, or the infinite-batch
/// binomial-quantile path. Never fails to return a (possibly infinite)
/// limit.
LalOutcome lal(const CalibrationSample& sample, const LalQuery& query);

}  // namespace lal

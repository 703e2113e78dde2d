#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lal/lal.hpp"
#include "lal/sample.hpp"

namespace lal {

struct CurvePoint {
  long long k = 1;      // calibration order statistic index, 1..n+1
  double alpha = 0.0;   // a(k): smallest level at which L_(k) is the limit
  double limit = 0.0;   // L_(k); +infinity at k = n+1 under default bounds
};

/// The exact limit-versus-level step curve for one sample at fixed (m, beta):
/// n+1 breakpoints (a(k), L_(k)) with alpha nonincreasing and limit
/// nondecreasing in k. For alpha in [a(k), a(k-1)) the limit is L_(k); for
/// alpha >= a(1) it is L_(1).
struct LalCurve {
  BatchSize m = BatchSize::finite(1);
  double beta = 1.0;
  std::vector<CurvePoint> breakpoints;  // k = 1..n+1 in order
  double mean_loss = 0.0;  // calibration average; no finite-sample guarantee

  /// min { k : a(k) <= alpha }; the same strict comparison as the direct
  /// query path, so stepping the curve reproduces it.
  long long pick_k(double alpha) const;
  double limit_at(double alpha) const;
};

/// Exact breakpoints for the sample. For infinite m the breakpoint level at
/// k is the upper binomial tail 1 - BIN-cdf(k-1; n, beta).
LalCurve curve_breakpoints(const CalibrationSample& sample, BatchSize m,
                           double beta);

struct CompareColumn {
  std::string name;
  double mean_loss = 0.0;
  std::vector<double> limits;     // one per grid alpha
  std::vector<double> coverages;  // exact coverage at the chosen k
};

/// Side-by-side limits for two or more samples over a shared alpha grid at
/// one (m, beta).
struct CompareTable {
  BatchSize m = BatchSize::finite(1);
  double beta = 1.0;
  std::vector<double> alphas;
  std::vector<CompareColumn> columns;
};

CompareTable compare_table(
    const std::vector<std::pair<std::string, CalibrationSample>>& samples,
    BatchSize m, double beta, const std::vector<double>& alphas);

}  // namespace lal

#pragma once

#include <limits>
#include <vector>

namespace lal {

/// A calibration loss sample: the sorted observed losses plus the support
/// sentinels that stand in for order statistics 0 and n+1. Immutable after
/// construction; freely shareable across threads.
class CalibrationSample {
 public:
  long long size() const { return static_cast<long long>(values_.size()); }

  /// Sorted nondecreasing; ties kept as-is.
  const std::vector<double>& values() const { return values_; }

  double support_min() const { return support_min_; }
  double support_max() const { return support_max_; }

  /// k-th order statistic for k in 0..n+1; k = 0 and k = n+1 return the
  /// support sentinels.
  double order_statistic(long long k) const;

  bool has_ties() const { return has_ties_; }

  /// Average calibration loss. A point estimate only; it carries no
  /// finite-sample guarantee.
  double mean_loss() const { return mean_; }

 private:
  friend CalibrationSample build_sample(std::vector<double>, double, double);
  CalibrationSample() = default;

  std::vector<double> values_;
  double support_min_ = -std::numeric_limits<double>::infinity();
  double support_max_ = std::numeric_limits<double>::infinity();
  double mean_ = 0.0;
  bool has_ties_ = false;
};

/// Sorts a copy of `raw` and validates it: nonempty, all values finite,
/// all values inside [support_min, support_max]. Errors name the offending
/// index in the original order.
CalibrationSample build_sample(
    std::vector<double> raw,
    double support_min = -std::numeric_limits<double>::infinity(),
    double support_max = std::numeric_limits<double>::infinity());

}  // namespace lal

#include "lal/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lal/errors.hpp"

namespace lal {

double CalibrationSample::order_statistic(long long k) const {
  const long long n = size();
  if (k < 0 || k > n + 1)
    throw std::domain_error("order_statistic: k must be in 0..n+1");
  if (k == 0) return support_min_;
  if (k == n + 1) return support_max_;
  return values_[static_cast<std::size_t>(k - 1)];
}

CalibrationSample build_sample(std::vector<double> raw, double support_min,
                               double support_max) {
  if (raw.empty()) throw DataError("build_sample: empty loss sample");
  if (std::isnan(support_min) || std::isnan(support_max) ||
      support_min > support_max)
    throw DataError("build_sample: invalid support bounds");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i]))
      throw DataError("build_sample: non-finite loss at index " +
                      std::to_string(i));
    if (raw[i] < support_min || raw[i] > support_max)
      throw DataError("build_sample: loss at index " + std::to_string(i) +
                      " falls outside the support bounds");
  }
  CalibrationSample s;
  s.support_min_ = support_min;
  s.support_max_ = support_max;
  s.mean_ = std::accumulate(raw.begin(), raw.end(), 0.0) /
            static_cast<double>(raw.size());
  std::sort(raw.begin(), raw.end());
  s.has_ties_ =
      std::adjacent_find(raw.begin(), raw.end()) != raw.end();
  s.values_ = std::move(raw);
  return s;
}

}  // namespace lal

#include "lal/curves.hpp"

#include <algorithm>
#include <stdexcept>

#include "lal/combinatorics.hpp"

namespace lal {

long long LalCurve::pick_k(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("pick_k: alpha must be in (0,1)");
  // Breakpoint alphas are nonincreasing in k.
  const auto it = std::partition_point(
      breakpoints.begin(), breakpoints.end(),
      [alpha](const CurvePoint& p) { return !(p.alpha <= alpha); });
  return it == breakpoints.end() ? breakpoints.back().k : it->k;
}

double LalCurve::limit_at(double alpha) const {
  return breakpoints[static_cast<std::size_t>(pick_k(alpha) - 1)].limit;
}

LalCurve curve_breakpoints(const CalibrationSample& sample, BatchSize m,
                           double beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::domain_error("curve_breakpoints: beta must be in (0,1]");
  const long long n = sample.size();
  LalCurve curve;
  curve.m = m;
  curve.beta = beta;
  curve.mean_loss = sample.mean_loss();
  curve.breakpoints.reserve(static_cast<std::size_t>(n) + 1);
  if (m.is_infinite()) {
    for (long long k = 1; k <= n + 1; ++k)
      curve.breakpoints.push_back(
          {k, 1.0 - binomial_cdf(k - 1, n, beta), sample.order_statistic(k)});
  } else {
    const long long q = ceil_fraction(m.value(), beta);
    const std::vector<double> a = tail_a_all(n, m.value(), q);
    for (long long k = 1; k <= n + 1; ++k)
      curve.breakpoints.push_back({k, a[static_cast<std::size_t>(k - 1)],
                                   sample.order_statistic(k)});
  }
  return curve;
}

CompareTable compare_table(
    const std::vector<std::pair<std::string, CalibrationSample>>& samples,
    BatchSize m, double beta, const std::vector<double>& alphas) {
  if (samples.size() < 2)
    throw std::invalid_argument("compare_table: needs at least two samples");
  if (alphas.empty())
    throw std::invalid_argument("compare_table: needs at least one alpha");
  CompareTable table;
  table.m = m;
  table.beta = beta;
  table.alphas = alphas;
  table.columns.reserve(samples.size());
  for (const auto& [name, sample] : samples) {
    const LalCurve curve = curve_breakpoints(sample, m, beta);
    CompareColumn col;
    col.name = name;
    col.mean_loss = sample.mean_loss();
    col.limits.reserve(alphas.size());
    col.coverages.reserve(alphas.size());
    for (double alpha : alphas) {
      const auto k = static_cast<std::size_t>(curve.pick_k(alpha) - 1);
      col.limits.push_back(curve.breakpoints[k].limit);
      col.coverages.push_back(1.0 - curve.breakpoints[k].alpha);
    }
    table.columns.push_back(std::move(col));
  }
  return table;
}

}  // namespace lal

// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lal/combinatorics.hpp"
#include "lal/curves.hpp"
#include "lal/io.hpp"
#include "lal/lal.hpp"
#include "lal/sample.hpp"
#include "lal/simulate.hpp"

using namespace lal;
using Rational = boost::multiprecision::cpp_rational;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

CalibrationSample random_sample(SplitMix64& rng, long long n) {
  std::vector<double> raw(static_cast<std::size_t>(n));
  for (auto& v : raw) v = rng.next_normal();
  return build_sample(std::move(raw));
}

// 1. order_pmf equals exhaustive enumeration to 1e-12 on the small grid.
bool pmf_vs_enumeration(std::string& detail) {
  for (long long n = 1; n <= 6; ++n)
    for (long long m = 1; m <= 5; ++m)
      for (long long i = 1; i <= m; ++i)
        for (long long j = 0; j <= n; ++j) {
          const double exact = enumeration_pmf(n, m, i, j).value();
          const double fast = order_pmf(n, m, i, j);
          if (std::abs(fast - exact) > 1e-12) {
            detail = "n=" + std::to_string(n) + " m=" + std::to_string(m) +
                     " i=" + std::to_string(i) + " j=" + std::to_string(j);
            return false;
          }
        }
  return true;
}

// 2. On every small instance the enumerated miscoverage equals a(k*) and
//    respects the level exactly.
bool small_instance_validity(std::string& detail) {
  for (long long n = 1; n <= 5; ++n)
    for (long long m = 1; m <= 4; ++m)
      for (const double beta : {0.25, 0.5, 1.0})
        for (const double alpha : {0.05, 0.2, 0.5}) {
          const long long q = ceil_fraction(m, beta);
          const long long k_star = k_star_finite(n, m, beta, alpha);
          const ExactFraction p = enumeration_exceeds(n, m, q, k_star);
          const bool valid = Rational(p.num, p.den) <= Rational(alpha);
          const bool exact =
              std::abs(p.value() - tail_a(k_star, n, m, q)) <= 1e-12;
          if (!valid || !exact) {
            detail = "n=" + std::to_string(n) + " m=" + std::to_string(m) +
                     " beta=" + format_double(beta) +
                     " alpha=" + format_double(alpha);
            return false;
          }
        }
  return true;
}

// 3. The ordinal pmf sums to one over j at large sizes.
bool partition_of_unity(std::string& detail) {
  for (const auto [n, m] :
       {std::pair{150LL, 30LL}, {1000LL, 1000LL}, {10000LL, 100LL}}) {
    for (const long long i : {1LL, (m + 1) / 2, m}) {
      double sum = 0.0;
      for (long long j = 0; j <= n; ++j) sum += order_pmf(n, m, i, j);
      if (std::abs(sum - 1.0) > 1e-10) {
        detail = "n=" + std::to_string(n) + " m=" + std::to_string(m) +
                 " i=" + std::to_string(i) + " sum=" + format_double(sum);
        return false;
      }
    }
  }
  return true;
}

// 4. The general path and the single-draw closed form pick the same k*.
bool single_draw_agreement(std::string& detail) {
  for (long long n = 1; n <= 200; ++n)
    for (int i = 1; i <= 99; ++i) {
      const double alpha = static_cast<double>(i) / 100.0;
      const long long general = k_star_finite(n, 1, 1.0, alpha);
      const long long fast = k_star_single(n, alpha);
      if (general != fast) {
        detail = "n=" + std::to_string(n) + " alpha=" + format_double(alpha) +
                 " general=" + std::to_string(general) +
                 " fast=" + std::to_string(fast);
        return false;
      }
    }
  return true;
}

// 5. Log-space tail vs the exact big-integer twin on random tuples.
bool log_vs_exact_tail(std::string& detail) {
  SplitMix64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    const long long n = 1 + static_cast<long long>(rng.next_u64() % 499);
    const long long m =
        1 + static_cast<long long>(rng.next_u64() %
                                   static_cast<std::uint64_t>(500 - n));
    const long long q = 1 + static_cast<long long>(rng.next_u64() % m);
    const long long k = 1 + static_cast<long long>(rng.next_u64() % (n + 1));
    const double exact = exact_tail_a(k, n, m, q).value();
    const double fast = tail_a(k, n, m, q);
    const double err = exact == 0.0
                           ? std::abs(fast)
                           : std::abs(fast - exact) / std::abs(exact);
    if (err > 1e-10) {
      detail = "k=" + std::to_string(k) + " n=" + std::to_string(n) +
               " m=" + std::to_string(m) + " q=" + std::to_string(q) +
               " err=" + format_double(err);
      return false;
    }
  }
  return true;
}

// 6. The finite-batch tail converges to the binomial upper tail as the
//    batch grows, monotonically and to 1e-2 by m = 1e6.
bool large_batch_limit(std::string& detail) {
  const double reference = 1.0 - binomial_cdf(129, 150, 0.8);
  double previous = 2.0;
  double last = 2.0;
  std::string trail;
  for (const long long m : {1000LL, 10000LL, 100000LL, 1000000LL}) {
    const long long q = ceil_fraction(m, 0.8);
    const double d = std::abs(tail_a(130, 150, m, q) - reference);
    trail += " d(" + std::to_string(m) + ")=" + format_double(d);
    if (!(d < previous)) {
      detail = "not strictly decreasing:" + trail;
      return false;
    }
    previous = d;
    last = d;
  }
  if (!(last <= 1e-2)) {
    detail = "final distance " + format_double(last) + " > 1e-2";
    return false;
  }
  return true;
}

// 7. Empirical miscoverage sits inside the two-sided band for a single
//    out-of-sample draw over continuous iid losses.
bool coverage_band(std::string& detail) {
  SimConfig cfg;
  cfg.generator.kind = Generator::Kind::iid_normal_losses;
  cfg.n = 30;
  cfg.m = 1;
  cfg.beta = 1.0;
  cfg.alphas = {0.05, 0.1, 0.2, 0.3};
  cfg.replicates = 2000;
  cfg.seed = 0;
  const CoverageReport report = coverage_mc(cfg);
  for (const auto& row : report.rows) {
    const double se = std::sqrt(row.alpha * (1.0 - row.alpha) / 2000.0);
    const double lo = row.alpha - 1.0 / 31.0 - 3.0 * se;
    const double hi = row.alpha + 3.0 * se;
    if (row.miscoverage < lo || row.miscoverage > hi) {
      detail = "alpha=" + format_double(row.alpha) +
               " miscoverage=" + format_double(row.miscoverage) + " band=[" +
               format_double(lo) + "," + format_double(hi) + "]";
      return false;
    }
  }
  return true;
}

// 8. The mean limit-to-quantile ratio decreases toward one on exponential
//    losses, ending inside [0.98, 1.15] at n = 320.
bool quantile_ratio_trend(std::string& detail) {
  SimConfig cfg;
  cfg.generator.kind = Generator::Kind::exponential_losses;
  cfg.alphas = {0.1};
  cfg.n_grid = {20, 80, 320};
  cfg.replicates = 500;
  cfg.seed = 0;
  const QuantileRatioReport report = quantile_ratio_mc(cfg);
  std::string trail;
  for (const auto& row : report.rows)
    trail += " r(" + std::to_string(row.n) + ")=" +
             format_double(row.mean_ratio);
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    if (!(report.rows[i].mean_ratio < report.rows[i - 1].mean_ratio)) {
      detail = "ratios not decreasing:" + trail;
      return false;
    }
  const double final_ratio = report.rows.back().mean_ratio;
  if (final_ratio < 0.98 || final_ratio > 1.15) {
    detail = "final ratio " + format_double(final_ratio) +
             " outside [0.98, 1.15]";
    return false;
  }
  return true;
}

// 9. The shifted scenario yields the larger mean limit at alpha = 0.05 in
//    at least 90 of 100 seeds (20 Monte Carlo replicates per seed).
bool shift_scenario_ordering(std::string& detail) {
  constexpr long long kN = 30;
  constexpr int kRepsPerSeed = 20;
  const long long k_star = k_star_single(kN, 0.05);
  const Generator p1{Generator::Kind::shift_scenario, 1.0, 0.5};
  const Generator p2{Generator::Kind::shift_scenario, 0.75, 0.75};
  int wins = 0;
  std::vector<double> calib(kN);
  const auto mean_limit = [&](const Generator& g, std::uint64_t seed,
                              std::uint64_t base) {
    double sum = 0.0;
    for (int r = 0; r < kRepsPerSeed; ++r) {
      SplitMix64 rng = SplitMix64::substream(
          seed, base + 2ull * static_cast<std::uint64_t>(r));
      for (auto& v : calib) v = g.draw(rng);
      std::sort(calib.begin(), calib.end());
      sum += calib[static_cast<std::size_t>(k_star - 1)];
    }
    return sum / kRepsPerSeed;
  };
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    if (mean_limit(p2, seed, 1) > mean_limit(p1, seed, 0)) ++wins;
  detail = "wins=" + std::to_string(wins) + "/100";
  return wins >= 90;
}

// 10. Randomized property suite, >= 1000 cases per property.
bool property_suite(std::string& detail) {
  SplitMix64 rng(4242);

  // monotonicity in alpha and in beta
  for (int t = 0; t < 1000; ++t) {
    const long long n = 1 + static_cast<long long>(rng.next_u64() % 40);
    const long long m = 1 + static_cast<long long>(rng.next_u64() % 15);
    const CalibrationSample s = random_sample(rng, n);
    const double a1 = 0.01 + 0.97 * rng.next_unit();
    const double a2 = a1 + (0.99 - a1) * rng.next_unit();
    const double b1 = 0.01 + 0.98 * rng.next_unit();
    const double b2 = b1 + (1.0 - b1) * rng.next_unit();
    const double lim_a1 = lal::lal(s, {BatchSize::finite(m), b1, a1}).limit;
    const double lim_a2 = lal::lal(s, {BatchSize::finite(m), b1, a2}).limit;
    if (lim_a2 > lim_a1) {
      detail = "limit increased with alpha";
      return false;
    }
    const double lim_b2 = lal::lal(s, {BatchSize::finite(m), b2, a1}).limit;
    if (lim_b2 < lim_a1) {
      detail = "limit decreased with beta";
      return false;
    }
  }

  // affine equivariance and permutation invariance
  for (int t = 0; t < 1000; ++t) {
    const long long n = 1 + static_cast<long long>(rng.next_u64() % 30);
    const long long m = 1 + static_cast<long long>(rng.next_u64() % 10);
    std::vector<double> raw(static_cast<std::size_t>(n));
    for (auto& v : raw) v = rng.next_normal();
    const double c = 0.1 + 3.0 * rng.next_unit();
    const double d = rng.next_normal();
    const LalQuery query{BatchSize::finite(m), 1.0,
                         0.01 + 0.97 * rng.next_unit()};
    const LalOutcome base = lal::lal(build_sample(raw), query);
    std::vector<double> mapped(raw.size());
    std::transform(raw.begin(), raw.end(), mapped.begin(),
                   [&](double v) { return c * v + d; });
    const LalOutcome scaled = lal::lal(build_sample(mapped), query);
    const double expected =
        std::isfinite(base.limit) ? c * base.limit + d : base.limit;
    if (scaled.k_star != base.k_star || scaled.limit != expected) {
      detail = "affine equivariance failed";
      return false;
    }
    std::vector<double> shuffled = raw;
    for (std::size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[rng.next_u64() % i]);
    const LalOutcome permuted = lal::lal(build_sample(shuffled), query);
    if (permuted.k_star != base.k_star || permuted.limit != base.limit) {
      detail = "permutation invariance failed";
      return false;
    }
  }

  // curve/point agreement at random levels (exact equality)
  int agreement_cases = 0;
  while (agreement_cases < 1000) {
    const long long n = 1 + static_cast<long long>(rng.next_u64() % 40);
    const bool infinite = rng.next_u64() % 4 == 0;
    const long long m = 1 + static_cast<long long>(rng.next_u64() % 20);
    const BatchSize batch =
        infinite ? BatchSize::infinite() : BatchSize::finite(m);
    const double beta = 0.05 + 0.95 * rng.next_unit();
    const CalibrationSample s = random_sample(rng, n);
    const LalCurve curve = curve_breakpoints(s, batch, beta);
    for (int r = 0; r < 25; ++r, ++agreement_cases) {
      const double alpha = 0.001 + 0.997 * rng.next_unit();
      const LalOutcome direct = lal::lal(s, {batch, beta, alpha});
      if (curve.pick_k(alpha) != direct.k_star ||
          curve.limit_at(alpha) != direct.limit) {
        detail = "curve/point mismatch";
        return false;
      }
    }
  }

  // determinism of seeded substreams and of a full report
  for (int t = 0; t < 1000; ++t) {
    const std::uint64_t seed = rng.next_u64();
    const std::uint64_t stream = rng.next_u64();
    SplitMix64 g1 = SplitMix64::substream(seed, stream);
    SplitMix64 g2 = SplitMix64::substream(seed, stream);
    if (g1.next_u64() != g2.next_u64() ||
        g1.next_normal() != g2.next_normal()) {
      detail = "substream determinism failed";
      return false;
    }
  }
  SimConfig cfg;
  cfg.generator.kind = Generator::Kind::shift_scenario;
  cfg.n = 30;
  cfg.m = 1;
  cfg.alphas = {0.05, 0.2};
  cfg.replicates = 500;
  cfg.seed = 99;
  std::ostringstream r1, r2;
  export_coverage_csv(coverage_mc(cfg), r1);
  export_coverage_csv(coverage_mc(cfg), r2);
  if (r1.str() != r2.str()) {
    detail = "seeded report not byte-identical";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"pmf matches exhaustive enumeration (1e-12)", pmf_vs_enumeration},
      {"small-instance validity and exact coverage", small_instance_validity},
      {"partition of unity at large sizes (1e-10)", partition_of_unity},
      {"single-draw fast path agrees with general path", single_draw_agreement},
      {"log-space tail vs exact big-integer tail (1e-10)", log_vs_exact_tail},
      {"large-batch tail converges to binomial tail", large_batch_limit},
      {"empirical miscoverage inside the two-sided band", coverage_band},
      {"limit/quantile ratio decreases to one", quantile_ratio_trend},
      {"shifted scenario yields larger limits (>=90/100)",
       shift_scenario_ordering},
      {"randomized property suite (1000+ cases each)", property_suite},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("%s %2zu  %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name.c_str(), seconds,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
  }
  return failures;
}

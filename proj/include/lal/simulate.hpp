#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lal/combinatorics.hpp"

namespace lal {

/// Counter-based deterministic generator built on the SplitMix64 finalizer:
/// output_i = mix(state0 + (i+1) * golden-gamma). Substreams derive an
/// independent starting state from (seed, stream index), so replicates can
/// be drawn in any order without sequence coupling.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static SplitMix64 substream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform on (0, 1] (safe under log).
  double next_unit();

  /// Standard normal via the Box-Muller cosine branch (two uniforms per draw).
  double next_normal();

  /// Exponential with rate 1.
  double next_exponential();

 private:
  std::uint64_t state_;
};

/// Loss generators for the verification harnesses.
struct Generator {
  enum class Kind {
    iid_normal_losses,    // standard normal "losses"
    exponential_losses,   // rate-1 exponential
    shift_scenario,       // |y - q(x)| under x ~ N(mu, sigma^2), y ~ N(x^3 - x, 1)
    constant_losses,      // degenerate: every loss equals `constant`
  };

  Kind kind = Kind::iid_normal_losses;
  double mu = 1.0;        // shift_scenario feature mean
  double sigma = 0.5;     // shift_scenario feature standard deviation
  double constant = 1.0;  // constant_losses value

  double draw(SplitMix64& rng) const;
  std::string describe() const;
};

/// Quadratic reference model for the shift scenario: least-squares
/// coefficients (intercept, x, x^2) fit to the reference training draw
/// (seed 0, n = 100, mu = 1, sigma = 0.5).
extern const std::array<double, 3> kShiftModelCoefficients;

/// q(x) under the reference model.
double shift_model_prediction(double x);

struct SimConfig {
  Generator generator;
  long long n = 30;                 // calibration size
  long long m = 1;                  // out-of-sample batch (finite)
  double beta = 1.0;
  std::vector<double> alphas;       // levels to evaluate
  std::vector<long long> n_grid;    // quantile-ratio study only
  long long replicates = 1000;
  std::uint64_t seed = 0;
};

/// Max n + m for exhaustive partition enumeration (~700k partitions).
inline constexpr long long kEnumerationCap = 22;

/// Exact probability of the ordinal event "the i-th smallest of m
/// out-of-sample values lies between calibration order statistics j and
/// j+1", by enumerating all C(n+m, m) equally probable origin-set
/// partitions of n+m distinct values. Brute-force twin of order_pmf.
ExactFraction enumeration_pmf(long long n, long long m, long long i,
                              long long j);

/// Exact probability that the q-th smallest of m out-of-sample values
/// exceeds the k-th calibration order statistic, by the same enumeration.
ExactFraction enumeration_exceeds(long long n, long long m, long long q,
                                  long long k);

struct CoverageRow {
  double alpha = 0.0;
  double miscoverage = 0.0;  // fraction of replicates with L_(q) > limit
  double std_error = 0.0;    // binomial standard error of the estimate
  double band_low = 0.0;     // alpha - 1/(n+1); meaningful for m = 1 only
  double band_high = 0.0;    // alpha
  bool has_band_low = false;
};

struct CoverageReport {
  SimConfig config;
  std::vector<CoverageRow> rows;
};

/// Monte Carlo miscoverage: per replicate draws n calibration and m
/// out-of-sample losses, computes the limit, and records whether the
/// q-th smallest out-of-sample loss exceeds it. Deterministic in the seed.
CoverageReport coverage_mc(const SimConfig& config);

struct QuantileRatioRow {
  long long n = 0;
  double mean_ratio = 0.0;  // E[limit / F^-1(1 - alpha)]
  double std_error = 0.0;
  double quantile_ref = 0.0;
};

struct QuantileRatioReport {
  SimConfig config;
  std::vector<QuantileRatioRow> rows;
};

/// Mean ratio of the m = 1 limit to the generator's (1-alpha)-quantile over
/// the config's n grid. The reference quantile is closed-form for
/// exponential losses and a 100000-sample empirical quantile otherwise.
QuantileRatioReport quantile_ratio_mc(const SimConfig& config);

}  // namespace lal

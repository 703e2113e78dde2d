#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lal/curves.hpp"
#include "lal/losses.hpp"
#include "lal/sample.hpp"
#include "lal/simulate.hpp"

namespace lal {

/// Shortest decimal that round-trips the value; infinities print as the
/// locale-independent tokens "inf" / "-inf".
std::string format_double(double value);

/// Inverse of format_double: strict full-string parse that also accepts the
/// inf tokens. Throws DataError on anything else (including NaN).
double parse_extended_real(const std::string& text);

struct IngestResult {
  CalibrationSample sample;
  /// Losses in input row order (the sample itself is sorted).
  std::vector<double> raw_losses;
  /// 1-based file line numbers (JSON: array indices) where categorical_nll
  /// hit the probability floor.
  std::vector<long long> clamped_lines;
};

/// Reads a loss file: either a plain `loss` column / flat JSON number array,
/// or prediction-record columns (`y`,`y_hat` | `label`,`p_0..p_K` |
/// `z_0..z_D`), which require a loss spec. Format is chosen by extension
/// (.json is JSON, anything else CSV). Parse errors carry line numbers.
IngestResult ingest_file(const std::string& path,
                         const std::optional<LossSpec>& spec,
                         double support_min, double support_max);

IngestResult ingest_csv(std::istream& in, const std::optional<LossSpec>& spec,
                        double support_min, double support_max);
IngestResult ingest_json(std::istream& in, const std::optional<LossSpec>& spec,
                         double support_min, double support_max);

/// Reads {"mean": [...], "cov": [[...], ...]} for a gaussian-nll spec.
void load_gaussian_params(const std::string& path, LossSpec& spec);

/// Curve CSV: header `alpha,limit,k,exact_coverage`, one row per breakpoint,
/// `limit` may be the literal token `inf`.
void export_curve_csv(const LalCurve& curve, std::ostream& out);

/// Reconstructs breakpoints from export_curve_csv output (exact round-trip).
std::vector<CurvePoint> parse_curve_csv(std::istream& in);

/// Wide CSV: alpha column plus limit/exact_coverage per sample; per-sample
/// mean losses go in `# mean_loss` comment lines (point estimates with no
/// finite-sample guarantee).
void export_compare_csv(const CompareTable& table, std::ostream& out);

/// Deterministic SVG step-curves: level on the vertical axis, limit on the
/// horizontal, one legend entry per named curve, dashed markers at the mean
/// calibration losses. Identical input yields byte-identical output.
void export_curves_svg(
    const std::vector<std::pair<std::string, LalCurve>>& curves,
    std::ostream& out);

void export_coverage_csv(const CoverageReport& report, std::ostream& out);
void export_quantile_ratio_csv(const QuantileRatioReport& report,
                               std::ostream& out);

/// Opens `path` for writing and streams `body(out)` into it; throws
/// DataError if the file cannot be created.
void write_file(const std::string& path,
                const std::function<void(std::ostream&)>& body);

}  // namespace lal

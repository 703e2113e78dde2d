#pragma once

#include <string>
#include <variant>
#include <vector>

namespace lal {

enum class LossKind {
  absolute,
  squared,
  overshoot,
  undershoot,
  misclassification_prob,
  categorical_nll,
  gaussian_nll,
};

/// Parses the CLI/file spelling of a loss kind (e.g. "overshoot",
/// "misclassification-prob"). Throws std::invalid_argument on unknown names.
LossKind parse_loss_kind(const std::string& name);
std::string loss_kind_name(LossKind kind);

/// Declarative loss choice. gaussian_nll additionally carries the fitted
/// mean vector and row-major covariance matrix; the covariance must be
/// symmetric positive definite.
struct LossSpec {
  LossKind kind = LossKind::absolute;
  std::vector<double> gaussian_mean;
  std::vector<double> gaussian_cov;  // row-major, gaussian_mean.size()^2 entries
};

struct RegressionRecord {
  double y = 0.0;
  double y_hat = 0.0;
};

/// label is 0-based and indexes probs.
struct ClassificationRecord {
  long long label = 0;
  std::vector<double> probs;
};

struct DensityRecord {
  std::vector<double> z;
};

using PredictionRecord =
    std::variant<RegressionRecord, ClassificationRecord, DensityRecord>;

/// Probabilities below this floor are clamped before taking the log, keeping
/// downstream order statistics finite; the clamp is reported.
inline constexpr double kProbFloor = 1e-300;

struct LossResult {
  double value = 0.0;
  bool clamped = false;  // categorical_nll hit the probability floor
};

/// Applies the spec's loss function to one prediction record:
///   absolute |y - y_hat|, squared (y - y_hat)^2,
///   overshoot max(0, y_hat - y), undershoot max(0, y - y_hat),
///   misclassification_prob 1 - p_label, categorical_nll -ln p_label,
///   gaussian_nll (z - mu)' Sigma^-1 (z - mu) + ln|Sigma|.
/// Throws std::invalid_argument on record/spec mismatch, labels out of
/// range, probabilities outside [0,1], or a non-SPD covariance.
LossResult compute_loss(const LossSpec& spec, const PredictionRecord& record);

}  // namespace lal

#include "lal/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace lal {

namespace {

const RegressionRecord& as_regression(const PredictionRecord& record) {
  if (const auto* r = std::get_if<RegressionRecord>(&record)) return *r;
  throw std::invalid_argument("compute_loss: expected a (y, y_hat) record");
}

const ClassificationRecord& as_classification(const PredictionRecord& record) {
  const auto* r = std::get_if<ClassificationRecord>(&record);
  if (!r)
    throw std::invalid_argument(
        "compute_loss: expected a (label, p_0..p_K) record");
  if (r->probs.empty())
    throw std::invalid_argument("compute_loss: empty probability vector");
  if (r->label < 0 || r->label >= static_cast<long long>(r->probs.size()))
    throw std::invalid_argument("compute_loss: label out of range");
  for (double p : r->probs)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument(
          "compute_loss: class probability outside [0,1]");
  return *r;
}

double gaussian_nll(const LossSpec& spec, const PredictionRecord& record) {
  const auto* r = std::get_if<DensityRecord>(&record);
  if (!r)
    throw std::invalid_argument("compute_loss: expected a (z_0..z_D) record");
  const auto d = static_cast<Eigen::Index>(spec.gaussian_mean.size());
  if (d == 0 ||
      spec.gaussian_cov.size() != static_cast<std::size_t>(d) * d)
    throw std::invalid_argument(
        "compute_loss: gaussian_nll needs a mean vector and a matching "
        "square covariance");
  if (static_cast<Eigen::Index>(r->z.size()) != d)
    throw std::invalid_argument(
        "compute_loss: record dimension does not match the gaussian mean");
  Eigen::Map<const Eigen::VectorXd> mu(spec.gaussian_mean.data(), d);
  Eigen::Map<const Eigen::VectorXd> z(r->z.data(), d);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      cov(spec.gaussian_cov.data(), d, d);
  if (!cov.isApprox(cov.transpose()))
    throw std::invalid_argument("compute_loss: covariance is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(
        "compute_loss: covariance is not positive definite");
  const Eigen::VectorXd diff = z - mu;
  const double quad = diff.dot(llt.solve(diff));
  const double log_det =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return quad + log_det;
}

}  // namespace

LossKind parse_loss_kind(const std::string& name) {
  if (name == "absolute") return LossKind::absolute;
  if (name == "squared") return LossKind::squared;
  if (name == "overshoot") return LossKind::overshoot;
  if (name == "undershoot") return LossKind::undershoot;
  if (name == "misclassification-prob" || name == "misclassification_prob")
    return LossKind::misclassification_prob;
  if (name == "categorical-nll" || name == "categorical_nll")
    return LossKind::categorical_nll;
  if (name == "gaussian-nll" || name == "gaussian_nll")
    return LossKind::gaussian_nll;
  throw std::invalid_argument("unknown loss kind: " + name);
}

std::string loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::absolute: return "absolute";
    case LossKind::squared: return "squared";
    case LossKind::overshoot: return "overshoot";
    case LossKind::undershoot: return "undershoot";
    case LossKind::misclassification_prob: return "misclassification-prob";
    case LossKind::categorical_nll: return "categorical-nll";
    case LossKind::gaussian_nll: return "gaussian-nll";
  }
  return "?";
}

LossResult compute_loss(const LossSpec& spec, const PredictionRecord& record) {
  switch (spec.kind) {
    case LossKind::absolute: {
      const auto& r = as_regression(record);
      return {std::abs(r.y - r.y_hat), false};
    }
    case LossKind::squared: {
      const auto& r = as_regression(record);
      return {(r.y - r.y_hat) * (r.y - r.y_hat), false};
    }
    case LossKind::overshoot: {
      const auto& r = as_regression(record);
      return {std::max(0.0, r.y_hat - r.y), false};
    }
    case LossKind::undershoot: {
      const auto& r = as_regression(record);
      return {std::max(0.0, r.y - r.y_hat), false};
    }
    case LossKind::misclassification_prob: {
      const auto& r = as_classification(record);
      return {1.0 - r.probs[static_cast<std::size_t>(r.label)], false};
    }
    case LossKind::categorical_nll: {
      const auto& r = as_classification(record);
      const double p = r.probs[static_cast<std::size_t>(r.label)];
      if (p < kProbFloor) return {-std::log(kProbFloor), true};
      return {-std::log(p), false};
    }
    case LossKind::gaussian_nll:
      return {gaussian_nll(spec, record), false};
  }
  throw std::invalid_argument("compute_loss: unknown loss kind");
}

}  // namespace lal

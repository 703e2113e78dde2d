#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "lal/losses.hpp"
#include "lal/simulate.hpp"

using namespace lal;

TEST_CASE("regression losses by hand") {
  const PredictionRecord rec = RegressionRecord{3.0, 5.0};  // y=3, y_hat=5
  CHECK(compute_loss({LossKind::overshoot}, rec).value == 2.0);
  CHECK(compute_loss({LossKind::undershoot}, rec).value == 0.0);
  CHECK(compute_loss({LossKind::absolute}, rec).value == 2.0);
  CHECK(compute_loss({LossKind::squared}, rec).value == 4.0);
}

TEST_CASE("classification losses by hand") {
  const PredictionRecord rec = ClassificationRecord{1, {0.1, 0.7, 0.2}};
  CHECK(compute_loss({LossKind::misclassification_prob}, rec).value ==
        doctest::Approx(0.3).epsilon(1e-14));
  CHECK(compute_loss({LossKind::categorical_nll}, rec).value ==
        doctest::Approx(-std::log(0.7)).epsilon(1e-14));
}

TEST_CASE("categorical_nll floors vanishing probabilities") {
  const PredictionRecord rec = ClassificationRecord{0, {0.0, 1.0}};
  const LossResult r = compute_loss({LossKind::categorical_nll}, rec);
  CHECK(r.clamped);
  CHECK(r.value == doctest::Approx(-std::log(1e-300)));
  const PredictionRecord fine = ClassificationRecord{1, {0.0, 1.0}};
  CHECK_FALSE(compute_loss({LossKind::categorical_nll}, fine).clamped);
}

TEST_CASE("gaussian_nll 1-d pinned value") {
  LossSpec spec{LossKind::gaussian_nll, {0.0}, {1.0}};
  CHECK(compute_loss(spec, DensityRecord{{2.0}}).value ==
        doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("gaussian_nll is invariant under joint coordinate permutation") {
  LossSpec spec{LossKind::gaussian_nll,
                {0.5, -1.0},
                {2.0, 0.3, 0.3, 1.0}};
  LossSpec swapped{LossKind::gaussian_nll,
                   {-1.0, 0.5},
                   {1.0, 0.3, 0.3, 2.0}};
  const double a = compute_loss(spec, DensityRecord{{1.0, 2.0}}).value;
  const double b = compute_loss(swapped, DensityRecord{{2.0, 1.0}}).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("loss error paths") {
  CHECK_THROWS_AS(compute_loss({LossKind::absolute},
                               ClassificationRecord{0, {1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(compute_loss({LossKind::misclassification_prob},
                               RegressionRecord{1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(compute_loss({LossKind::misclassification_prob},
                               ClassificationRecord{3, {0.5, 0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(compute_loss({LossKind::misclassification_prob},
                               ClassificationRecord{0, {1.5, -0.5}}),
                  std::invalid_argument);
  LossSpec bad{LossKind::gaussian_nll, {0.0, 0.0}, {1.0, 2.0, 2.0, 1.0}};
  CHECK_THROWS_AS(compute_loss(bad, DensityRecord{{0.0, 0.0}}),
                  std::invalid_argument);  // not positive definite
  LossSpec mismatched{LossKind::gaussian_nll, {0.0, 0.0},
                      {1.0, 0.0, 0.0, 1.0}};
  CHECK_THROWS_AS(compute_loss(mismatched, DensityRecord{{0.0}}),
                  std::invalid_argument);
}

TEST_CASE("loss identities hold on random records") {
  SplitMix64 rng(17);
  for (int t = 0; t < 500; ++t) {
    const RegressionRecord rec{rng.next_normal() * 3.0,
                               rng.next_normal() * 3.0};
    const double over = compute_loss({LossKind::overshoot}, rec).value;
    const double under = compute_loss({LossKind::undershoot}, rec).value;
    const double abs = compute_loss({LossKind::absolute}, rec).value;
    const double sq = compute_loss({LossKind::squared}, rec).value;
    CHECK(abs == over + under);
    CHECK((over == 0.0 || under == 0.0));
    CHECK(sq == doctest::Approx(abs * abs).epsilon(1e-14));
  }
}

TEST_CASE("classification losses vanish only at certainty") {
  const PredictionRecord sure = ClassificationRecord{0, {1.0, 0.0}};
  CHECK(compute_loss({LossKind::misclassification_prob}, sure).value == 0.0);
  CHECK(compute_loss({LossKind::categorical_nll}, sure).value == 0.0);
  const PredictionRecord unsure = ClassificationRecord{0, {0.9, 0.1}};
  CHECK(compute_loss({LossKind::misclassification_prob}, unsure).value > 0.0);
  CHECK(compute_loss({LossKind::categorical_nll}, unsure).value > 0.0);
}

TEST_CASE("loss kind names round-trip") {
  for (const LossKind kind :
       {LossKind::absolute, LossKind::squared, LossKind::overshoot,
        LossKind::undershoot, LossKind::misclassification_prob,
        LossKind::categorical_nll, LossKind::gaussian_nll})
    CHECK(parse_loss_kind(loss_kind_name(kind)) == kind);
  CHECK_THROWS_AS(parse_loss_kind("huber"), std::invalid_argument);
}

#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "optstop/asymptotics.hpp"
#include "optstop/errors.hpp"

using namespace optstop;

namespace {

const Probability kFive(0.05);
const double kH05 = 0.82290335124025398;

}  // namespace

TEST(EslClosedForm, Values) {
  EXPECT_NEAR(esl_plus_closed_form(TestFamily::GaussKnownVariance, 1), 0.3989422804014327, 1e-16);
  EXPECT_EQ(esl_plus_closed_form(TestFamily::StudentT, 9),
            esl_plus_closed_form(TestFamily::GaussKnownVariance, 9));
  EXPECT_NEAR(esl_plus_closed_form(TestFamily::ExponentialMean, 1), 0.36787944117144232, 1e-16);
  EXPECT_NEAR(esl_plus_closed_form(TestFamily::ExponentialMean, 2), 0.54134113294645077, 1e-15);
  EXPECT_NEAR(esl_plus_closed_form(TestFamily::ExponentialMean, 20), 1.7767063478417044, 1e-14);
  EXPECT_THROW(esl_plus_closed_form(TestFamily::ExponentialMean, 0), std::invalid_argument);
}

TEST(EslClosedForm, ExponentialMatchesDirectProduct) {
  // (l/e)^l / (l-1)! evaluated naively where it does not overflow
  for (int l = 1; l <= 150; ++l) {
    double direct = 1.0;
    for (int i = 1; i <= l; ++i) direct *= static_cast<double>(l) / M_E;
    for (int i = 1; i < l; ++i) direct /= i;
    EXPECT_NEAR(esl_plus_closed_form(TestFamily::ExponentialMean, l) / direct, 1.0, 1e-12) << l;
  }
}

TEST(EslClosedForm, ExponentialSqrtGrowth) {
  const double at_1e4 = esl_plus_closed_form(TestFamily::ExponentialMean, 10'000);
  EXPECT_NEAR(at_1e4 * std::sqrt(2.0 * special::kPi / 1e4), 1.0, 1e-4);
  const double at_1e6 = esl_plus_closed_form(TestFamily::ExponentialMean, 1'000'000);
  EXPECT_TRUE(std::isfinite(at_1e6));
  EXPECT_NEAR(at_1e6 * std::sqrt(2.0 * special::kPi / 1e6), 1.0, 1e-6);
}

TEST(EslClosedForm, Table) {
  const auto t = esl_plus_closed_form_table(TestFamily::ExponentialMean, 5);
  ASSERT_EQ(t.size(), 5u);
  for (int l = 1; l <= 5; ++l) {
    EXPECT_EQ(t[static_cast<std::size_t>(l - 1)], esl_plus_closed_form(TestFamily::ExponentialMean, l));
  }
}

TEST(EslBound, HoldsForBothFamilies) {
  const auto gauss = esl_lower_bound_check(TestFamily::GaussKnownVariance, 200);
  for (const auto& row : gauss) EXPECT_NEAR(row.esl / row.bound, std::sqrt(2.0), 1e-14);
  const auto expo = esl_lower_bound_check(TestFamily::ExponentialMean, 200);
  for (const auto& row : expo) EXPECT_GE(row.esl, row.bound) << row.ell;
  EXPECT_NEAR(expo[1].esl, 0.54134113294645077, 1e-15);
  EXPECT_NEAR(expo[1].bound, 0.36787944117144232, 1e-15);
  EXPECT_NEAR(expo[19].bound, std::sqrt(10.0) / M_E, 1e-15);
  EXPECT_NEAR(expo[19].bound, 1.1633369, 1e-7);
}

TEST(PredictSum, GaussOneExtra) {
  const auto esl = esl_plus_closed_form_table(TestFamily::GaussKnownVariance, 1);
  const auto b = predict_rho_sum(100, 1, kFive, esl, EslSource::ClosedFormGauss);
  EXPECT_NEAR(b.rho, 0.0823, 1e-4);
  EXPECT_NEAR(b.rho, kH05 / 10.0, 1e-15);
  EXPECT_EQ(b.mode, PredictionMode::SumFormula);
  EXPECT_EQ(b.esl_source, EslSource::ClosedFormGauss);
  EXPECT_NEAR(b.implied_alpha_nk(kFive), 0.05 * (1.0 + b.rho), 1e-18);
  EXPECT_FALSE(b.outside_validity);
}

TEST(PredictSum, GaussTwoExtraMultiplier) {
  const auto esl = esl_plus_closed_form_table(TestFamily::GaussKnownVariance, 2);
  const auto b = predict_rho_sum(100, 2, kFive, esl, EslSource::ClosedFormGauss);
  const double multiplier = b.rho * 10.0 / b.h.value();
  EXPECT_NEAR(multiplier, 1.0 + 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_EQ(std::round(multiplier * 100.0), 171.0);
  EXPECT_NEAR(b.percent(), kH05 * 17.071067811865476, 1e-12);
}

TEST(PredictSum, GaussSpecialization) {
  for (std::int64_t k : {1, 3, 10, 100, 1000}) {
    for (std::int64_t n : {10, 1000, 1000000}) {
      const auto esl = esl_plus_closed_form_table(TestFamily::GaussKnownVariance, k);
      const auto b = predict_rho_sum(n, k, kFive, esl, EslSource::ClosedFormGauss);
      double s = 0.0;
      for (std::int64_t l = 1; l <= k; ++l) s += 1.0 / std::sqrt(static_cast<double>(l));
      EXPECT_NEAR(b.rho, kH05 / std::sqrt(static_cast<double>(n)) * s, 1e-12 * b.rho);
      for (double t : b.terms) EXPECT_GT(t, 0.0);
    }
  }
}

TEST(PredictSum, ExponentialFactor) {
  const auto esl = esl_plus_closed_form_table(TestFamily::ExponentialMean, 1);
  const auto b = predict_rho_sum(100, 1, kFive, esl, EslSource::ClosedFormExponential);
  const double factor = b.rho * 10.0 / b.h.value();
  EXPECT_NEAR(factor, 0.92213700889578912, 1e-14);
  EXPECT_EQ(std::round(factor * 100.0) / 100.0, 0.92);
}

TEST(PredictSum, Validation) {
  const std::vector<double> esl{0.4, 0.5};
  EXPECT_THROW(predict_rho_sum(100, 0, kFive, esl), std::invalid_argument);
  EXPECT_THROW(predict_rho_sum(100, 3, kFive, esl), std::invalid_argument);
  const std::vector<double> bad{0.4, 0.0};
  EXPECT_THROW(predict_rho_sum(100, 2, kFive, bad), std::invalid_argument);
  EXPECT_THROW(predict_rho_sum(0, 1, kFive, esl), std::invalid_argument);
}

TEST(PredictSqrt, Values) {
  const auto b = predict_rho_sqrt(10'000, 100, kFive);
  EXPECT_NEAR(b.rho, 0.1646, 1e-3);
  EXPECT_NEAR(b.rho, 2.0 * kH05 * 0.1, 1e-14);
  EXPECT_TRUE(b.terms.empty());
  EXPECT_FALSE(b.outside_validity);
  const auto half = predict_rho_sqrt(400, 9, Probability(0.5));
  EXPECT_NEAR(half.rho, 2.0 / special::kPi * 0.15, 1e-15);
  EXPECT_TRUE(predict_rho_sqrt(100, 20, kFive).outside_validity);
}

TEST(PredictSqrt, SumAgreesForLargeK) {
  const std::int64_t k = 10'000, n = 100'000'000;
  const auto esl = esl_plus_closed_form_table(TestFamily::GaussKnownVariance, k);
  const double ratio = predict_rho_sum(n, k, kFive, esl).rho / predict_rho_sqrt(n, k, kFive).rho;
  EXPECT_NEAR(ratio, 1.0, 0.01);
}

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  const auto r = integrate_panels([](double x) { return std::pow(x, 20) - 3 * x * x; }, 0.0, 2.0, 1);
  EXPECT_NEAR(r, std::pow(2.0, 21) / 21.0 - 8.0, 1e-9);
  EXPECT_NEAR(integrate_panels([](double x) { return std::exp(-x); }, 0.0, 30.0, 30),
              -std::expm1(-30.0), 1e-15);
  double wsum = 0.0;
  for (double w : GaussLegendre64::instance().weights) wsum += w;
  EXPECT_NEAR(wsum, 2.0, 1e-14);
}

TEST(Quadrature, RefiningGivesUpCleanly) {
  auto wild = [](double x) { return std::sin(1e6 * x); };
  EXPECT_THROW(integrate_refining(wild, 0.0, 1.0, 1, 1e-15, 8), NumericalFailure);
}

TEST(ExactGaussK1, GoldenValueAtHundred) {
  const auto r = exact_gauss_k1(100, kFive, 1e-14);
  EXPECT_NEAR(r.value, 0.054096291096066735, 1e-14);
  EXPECT_LE(r.abs_error, 1e-14);
}

TEST(ExactGaussK1, OracleGrid) {
  struct Row {
    std::int64_t n;
    double alpha_n1;
  };
  for (const Row& row : {Row{1, 0.080075525654669977}, Row{10, 0.062468596687799602},
                         Row{10'000, 0.0504114333235166}, Row{1'000'000, 0.0500411451492086},
                         Row{100'000'000, 0.0500041145167378}}) {
    EXPECT_NEAR(exact_gauss_k1(row.n, kFive, 1e-15).value, row.alpha_n1, 2e-15) << row.n;
  }
}

TEST(ExactGaussK1, ScaledExcessIsMonotoneAndConverges) {
  double prev = 0.0;
  for (std::int64_t n = 100; n <= 100'000'000; n *= 10) {
    const double scaled = gauss_k1_scaled_excess(n, kFive, 1e-13).value / 0.05;
    EXPECT_GT(scaled, prev) << n;
    prev = scaled;
  }
  EXPECT_LT(std::fabs(prev / kH05 - 1.0), 1e-3);
  EXPECT_NEAR(prev, 0.8229033, 1e-6);
}

TEST(ExactGaussK1, NeverBelowAlpha) {
  for (double a : {0.001, 0.01, 0.05, 0.2, 0.5, 0.9}) {
    for (std::int64_t n : {1, 2, 5, 50, 5000}) {
      EXPECT_GE(exact_gauss_k1(n, Probability(a), 1e-13).value, a) << a << " " << n;
    }
  }
}

TEST(ExactGaussK1, Validation) {
  EXPECT_THROW(exact_gauss_k1(0, kFive, 1e-12), std::invalid_argument);
  EXPECT_THROW(exact_gauss_k1(10, kFive, 0.0), std::invalid_argument);
}

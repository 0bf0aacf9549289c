#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "dimtrunc/error_table.hpp"
#include "dimtrunc/theory.hpp"

using namespace dimtrunc;

namespace {

std::vector<double> power_law(double scale, double decay, std::size_t count) {
  std::vector<double> b(count);
  for (std::size_t j = 1; j <= count; ++j) b[j - 1] = scale * std::pow(double(j), -decay);
  return b;
}

TheoryParams affine_params(double c, double p, std::vector<double> b) {
  TheoryParams params;
  params.p = p;
  params.b = std::move(b);
  params.theta = TheoryParams::factorial_theta(c, params.k() + 2);
  return params;
}

ErrorTable table_of(const std::vector<std::size_t>& s, auto&& error) {
  ErrorTable t;
  for (std::size_t v : s) t.rows.push_back({v, error(double(v))});
  return t;
}

}  // namespace

TEST(ExpectedRate, FigureRates) {
  EXPECT_DOUBLE_EQ(expected_rate(1.5), -1.0);
  EXPECT_DOUBLE_EQ(expected_rate(2.0), -1.5);
  EXPECT_DOUBLE_EQ(expected_rate(3.0), -2.5);
  EXPECT_THROW(expected_rate(1.0), ConfigError);
  EXPECT_THROW(expected_rate(0.5), ConfigError);
}

TEST(TaylorOrder, Examples) {
  EXPECT_EQ(taylor_order(0.5), 2);
  EXPECT_EQ(taylor_order(2.0 / 3.0), 3);
  EXPECT_EQ(taylor_order(0.9), 10);
  EXPECT_THROW(taylor_order(0.0), ConfigError);
  EXPECT_THROW(taylor_order(1.0), ConfigError);
}

TEST(TaylorOrder, SummabilityExponentChoice) {
  EXPECT_NEAR(summability_exponent(2.0), 0.501, 1e-15);
  EXPECT_EQ(taylor_order(summability_exponent(2.0)), 3);
  EXPECT_EQ(taylor_order(summability_exponent(1.5)), 4);
  EXPECT_EQ(taylor_order(summability_exponent(3.0)), 2);
}

TEST(Stechkin, SingleNonzeroHasEmptyTail) {
  const std::vector<double> b{0.7, 0.0, 0.0, 0.0};
  for (std::size_t s = 1; s <= 4; ++s) EXPECT_EQ(tail_sum(b, s), 0.0);
}

TEST(Stechkin, BoundHoldsForInverseSquares) {
  const auto b = power_law(1.0, 2.0, 100000);
  const double tail = tail_sum(b, 10, 1.0);
  // zeta(2) minus the head, minus the tail beyond the stored length (~1e-5)
  double head = 0.0;
  for (int j = 1; j <= 10; ++j) head += 1.0 / (j * j);
  EXPECT_NEAR(tail, std::numbers::pi * std::numbers::pi / 6.0 - head - 1e-5, 1e-9);
  EXPECT_LE(tail, stechkin_tail_bound(b, 10, 0.6));
  for (std::size_t s : {1u, 5u, 100u, 10000u}) EXPECT_LE(tail_sum(b, s), stechkin_tail_bound(b, s, 0.6));
}

TEST(Stechkin, Homogeneity) {
  const auto b = power_law(1.0, 2.5, 500);
  const auto cb = power_law(3.5, 2.5, 500);
  EXPECT_NEAR(stechkin_tail_bound(cb, 7, 0.5), 3.5 * stechkin_tail_bound(b, 7, 0.5),
              1e-13 * stechkin_tail_bound(cb, 7, 0.5));
}

TEST(Stechkin, RejectsNonMonotone) {
  const std::vector<double> b{0.1, 0.2};
  EXPECT_THROW(stechkin_tail_bound(b, 1, 0.5), ConfigError);
  EXPECT_THROW(tail_sum(b, 1), ConfigError);
}

TEST(RegularityBound, Examples) {
  TheoryParams params;
  params.p = 0.5;  // k = 2
  params.b = {0.5, 0.25, 0.125};
  params.theta = {1.0, 1.0, 1.0, 1.0};
  const unsigned zero[] = {0, 0, 0};
  EXPECT_DOUBLE_EQ(regularity_bound(params, zero), 4.0);
  const unsigned e12[] = {1, 1, 0};
  EXPECT_DOUBLE_EQ(regularity_bound(params, e12), 3.0);
  const unsigned too_high[] = {2, 1, 1};
  EXPECT_THROW(regularity_bound(params, too_high), ConfigError);
}

TEST(RegularityBound, AffineCase) {
  const double c = 0.8;
  const auto params = affine_params(c, 0.5, {0.5, 0.25, 0.125});
  const unsigned nu[] = {2, 0, 1};
  EXPECT_NEAR(regularity_bound(params, nu), 4 * c * c * 24 * 0.25 * 0.125, 1e-14);
}

TEST(UpperBound, ZeroSequenceGivesZero) {
  const auto params = affine_params(1.0, 0.5, std::vector<double>(10, 0.0));
  EXPECT_EQ(truncation_upper_bound(params, 3), 0.0);
}

TEST(UpperBound, NonincreasingInS) {
  const auto params = affine_params(1.0, summability_exponent(2.0), power_law(0.3, 2.0, 2048));
  double prev = truncation_upper_bound(params, 1);
  for (std::size_t s = 2; s <= 10000; ++s) {
    const double v = truncation_upper_bound(params, s);
    ASSERT_LE(v, prev) << "s=" << s;
    prev = v;
  }
}

TEST(UpperBound, FirstTermSlope) {
  const double p = summability_exponent(1.5);
  const auto params = affine_params(1.3, p, power_law(0.2, 1.5, 1000));
  for (std::size_t s : {3u, 40u, 700u}) {
    const double a = truncation_bound_terms(params, s).first;
    const double b = truncation_bound_terms(params, 2 * s).first;
    EXPECT_NEAR(std::log(b / a) / std::log(2.0), 1.0 - 2.0 / p, 1e-9);
  }
}

TEST(UpperBound, MomentSwapScalesTerms) {
  auto params = affine_params(1.0, summability_exponent(2.0), power_law(0.3, 2.0, 200));
  params.c_mu = 1.0 / 12.0;
  params.c_xi = 1.0 / 30.0;
  const int k = params.k();
  const double ratio = params.c_xi / params.c_mu;
  for (std::size_t s : {1u, 10u, 100u}) {
    const auto mu = truncation_bound_terms(params, s, MomentSource::mu);
    const auto xi = truncation_bound_terms(params, s, MomentSource::xi);
    EXPECT_NEAR(xi.first / mu.first, std::pow(ratio, k), 1e-12 * std::pow(ratio, k));
    EXPECT_NEAR(xi.second / mu.second, std::pow(ratio, k + 1), 1e-12 * std::pow(ratio, k + 1));
  }
}

TEST(UpperBound, HugeConstantsRaiseRangeError) {
  const auto params = affine_params(1e300, 0.5, power_law(50.0, 2.0, 10));
  EXPECT_THROW(truncation_upper_bound(params, 1), RangeError);
}

TEST(UpperBound, LogTermsMatchLinearTermsAndSurviveOverflow) {
  const auto params = affine_params(1.3, summability_exponent(2.0), power_law(0.3, 2.0, 100));
  for (std::size_t s : {1u, 7u, 60u}) {
    const auto lin = truncation_bound_terms(params, s);
    const auto log = log_truncation_bound_terms(params, s);
    EXPECT_NEAR(std::exp(log.first), lin.first, 1e-12 * lin.first);
    EXPECT_NEAR(std::exp(log.second), lin.second, 1e-12 * lin.second);
    EXPECT_NEAR(std::exp(log.total()), lin.total(), 1e-12 * lin.total());
  }
  const auto huge = affine_params(1e300, 0.5, power_law(50.0, 2.0, 10));
  EXPECT_TRUE(std::isfinite(log_truncation_bound_terms(huge, 1).total()));
}

TEST(UpperBound, ValidatesParams) {
  TheoryParams params;
  params.p = 0.5;
  params.b = {1.0};
  params.theta = {1.0};
  EXPECT_THROW(truncation_upper_bound(params, 1), ConfigError);
  params.theta = {1.0, 1.0, 1.0, 1.0};
  EXPECT_THROW(truncation_upper_bound(params, 0), ConfigError);
}

TEST(FitRate, ExactPowerLaw) {
  const auto t = table_of({2, 4, 8, 16, 32, 64, 128, 256, 512},
                          [](double s) { return std::pow(s, -1.5); });
  const auto fit = fit_rate(t, 2);
  EXPECT_NEAR(fit.slope, -1.5, 1e-12);
  EXPECT_NEAR(fit.residual, 0.0, 1e-12);
  EXPECT_EQ(fit.rows_used, 9u);
}

TEST(FitRate, TwoPoints) {
  ErrorTable t;
  t.rows = {{6, 0.3}, {12, 0.15}};
  EXPECT_NEAR(fit_rate(t, 1).slope, -1.0, 1e-15);
}

TEST(FitRate, InvariantUnderRescalingAndReindexing) {
  const auto base = table_of({3, 5, 9, 20, 41}, [](double s) { return std::exp(-0.1 * s) + 1 / s; });
  const auto scaled = table_of({3, 5, 9, 20, 41}, [](double s) { return 7.0 * (std::exp(-0.1 * s) + 1 / s); });
  const auto f0 = fit_rate(base, 1);
  const auto f1 = fit_rate(scaled, 1);
  EXPECT_NEAR(f0.slope, f1.slope, 1e-12);
  EXPECT_NEAR(f1.intercept - f0.intercept, std::log(7.0), 1e-12);

  ErrorTable reindexed = base;
  for (auto& row : reindexed.rows) row.s *= 4;
  const auto f2 = fit_rate(reindexed, 1);
  EXPECT_NEAR(f2.slope, f0.slope, 1e-12);
  EXPECT_NEAR(f2.intercept, f0.intercept - f0.slope * std::log(4.0), 1e-12);
}

TEST(FitRate, ZeroRowsExcludedAndTooFewRowsRejected) {
  ErrorTable t;
  t.metadata["s_ref"] = "8";
  t.rows = {{2, 0.5}, {4, 0.25}, {8, 0.0}};
  const auto fit = fit_rate(t, 1);
  EXPECT_EQ(fit.zero_rows_excluded, 1u);
  EXPECT_EQ(fit.rows_used, 2u);
  EXPECT_THROW(fit_rate(t, 3), ConfigError);
}

TEST(ErrorTableCsv, RoundTripIsExact) {
  ErrorTable t;
  t.metadata = {{"theta", "2"}, {"norm", "L2"}, {"s_ref", "512"}};
  t.rows = {{2, 0.1 / 3.0}, {4, 1e-17}, {512, 0.0}};
  const auto back = parse_csv(to_csv(t));
  EXPECT_EQ(back.metadata, t.metadata);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].s, t.rows[i].s);
    EXPECT_EQ(back.rows[i].error, t.rows[i].error);
  }
}

TEST(ErrorTableCsv, RejectsMalformedInput) {
  EXPECT_THROW(parse_csv("2,0.1\n"), ParseError);
  EXPECT_THROW(parse_csv("s,error\n2;0.1\n"), ParseError);
  EXPECT_THROW(parse_csv("s,error\n4,0.1\n2,0.2\n"), ConfigError);
  EXPECT_THROW(parse_csv("# s_ref=8\ns,error\n4,0\n"), ConfigError);
  EXPECT_THROW(parse_csv("s,error\n4,-1\n"), ConfigError);
}

#include <gtest/gtest.h>

#include <cmath>

#include "pingpong.hpp"

using namespace pingpong;

namespace {

const FieldSpec Q5 = FieldSpec::padic(5, 20);

Padic q5(std::int64_t a, std::int64_t b = 1) { return Padic::from_rational(a, b, 5, 20); }

}  // namespace

TEST(FieldSpec, ProximalityConstant) {
  EXPECT_EQ(FieldSpec::real().proximality_constant(), 4.0);
  EXPECT_EQ(FieldSpec::complex().proximality_constant(), 4.0);
  EXPECT_EQ(FieldSpec::padic(7, 10).proximality_constant(), 7.0);
  EXPECT_THROW(FieldSpec::padic(4, 10), DomainError);
  EXPECT_THROW(FieldSpec::padic(5, 0), DomainError);
}

TEST(AbsValue, Examples) {
  EXPECT_EQ(abs_value(-3.0), 3.0);
  EXPECT_DOUBLE_EQ(abs_value(q5(5)), 0.2);
  EXPECT_NEAR(abs_value(Complex(1, 1)), 1.41421356, 1e-8);
  EXPECT_EQ(abs_value(Padic::zero(5, 20)), 0.0);
}

TEST(Valuation, Examples) {
  EXPECT_EQ(valuation(q5(50), Q5), 2);
  EXPECT_EQ(valuation(q5(1), Q5), 0);
  EXPECT_EQ(valuation(q5(1, 5), Q5), -1);
  EXPECT_EQ(valuation(Padic::zero(5, 20), Q5), Padic::kInfinite);
  EXPECT_THROW(valuation(2.0, FieldSpec::real()), DomainError);
}

TEST(Padic, RationalIngestion) {
  EXPECT_TRUE(congruent(q5(1, 3) * q5(3), q5(1)));
  EXPECT_TRUE(congruent(q5(2, 25) * q5(25, 2), q5(1)));
  EXPECT_EQ(q5(-1).unit_digits(), std::vector<std::int64_t>(20, 4));
  EXPECT_EQ(q5(7).unit_digits().front(), 2);
}

TEST(Padic, DigitsRoundTrip) {
  const auto x = Padic::from_digits(-2, {3, 0, 4, 1}, 5, 20);
  EXPECT_EQ(x.valuation(), -2);
  EXPECT_EQ(x.unit_digits(), (std::vector<std::int64_t>{3, 0, 4, 1}));
  EXPECT_EQ(x.relative_precision(), 4);
  EXPECT_THROW(Padic::from_digits(0, {5}, 5, 20), DomainError);
  EXPECT_THROW(Padic::from_digits(0, {0, 1}, 5, 20), DomainError);
}

TEST(Padic, CancellationLosesDigits) {
  const Padic x = q5(1) + q5(125 * 7);
  const Padic d = x - q5(1);
  EXPECT_EQ(d.valuation(), 3);
  EXPECT_EQ(d.relative_precision(), 17);
  EXPECT_EQ(d.absolute_precision(), 20);
}

TEST(Padic, FullCancellationGivesInexactZero) {
  const Padic x = q5(3, 7);
  const Padic z = x - x;
  EXPECT_TRUE(z.is_zero());
  EXPECT_FALSE(z.is_exact_zero());
  EXPECT_EQ(z.absolute_precision(), 20);
  EXPECT_THROW(z.inverse(), PrecisionExhausted);
  EXPECT_THROW(Padic::zero(5, 20).inverse(), DomainError);
  // an exact zero absorbs products, an inexact one keeps its precision bound
  EXPECT_TRUE((Padic::zero(5, 20) * q5(1, 25)).is_exact_zero());
  EXPECT_EQ((z * q5(1, 25)).absolute_precision(), 18);
}

TEST(Padic, MixedPrimesRejected) {
  EXPECT_THROW(q5(1) + Padic::from_int(1, 7, 20), DomainError);
}

TEST(Padic, UltrametricAndMultiplicative) {
  Rng rng(1);
  for (int t = 0; t < 100000; ++t) {
    const Padic x = Padic::random(rng, 5, 20, -4, 4);
    const Padic y = Padic::random(rng, 5, 20, -4, 4);
    const Padic s = x + y;
    ASSERT_LE(s.abs(), std::max(x.abs(), y.abs()));
    if (x.abs() != y.abs()) ASSERT_EQ(s.abs(), std::max(x.abs(), y.abs()));
    ASSERT_DOUBLE_EQ((x * y).abs(), x.abs() * y.abs());
    ASSERT_EQ((x * y).valuation(), x.valuation() + y.valuation());
  }
}

TEST(Archimedean, Multiplicative) {
  Rng rng(2);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 100000; ++t) {
    const double x = nd(rng), y = nd(rng);
    ASSERT_NEAR(abs_value(x * y), abs_value(x) * abs_value(y), 1e-12 * abs_value(x * y));
    const Complex z(nd(rng), nd(rng)), w(nd(rng), nd(rng));
    ASSERT_NEAR(abs_value(z * w), abs_value(z) * abs_value(w), 1e-12 * abs_value(z * w));
  }
}

TEST(Padic, DivisionInvertsMultiplication) {
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    const Padic x = Padic::random(rng, 5, 20, -3, 3);
    const Padic y = Padic::random(rng, 5, 20, -3, 3);
    ASSERT_TRUE(congruent((x * y) / y, x));
  }
}

/*
   Copyright 2026 The skewlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "skewlab/qfield.hpp"

using namespace skewlab;

namespace {

const QReal kAlpha = make_qreal(BigInt(-2), BigInt(1), BigInt(1), BigInt(1), 5);
QReal default_alpha() { return kAlpha; }

QReal q(long an, long ad, long bn, long bd, std::int64_t d) {
  return make_qreal(BigInt(an), BigInt(ad), BigInt(bn), BigInt(bd), d);
}

TEST(QField, RejectsBadParameters) {
  EXPECT_THROW(q(1, 1, 1, 1, 4), Error);
  EXPECT_THROW(q(1, 1, 1, 1, 1), Error);
  EXPECT_THROW(q(1, 0, 1, 1, 5), Error);
  EXPECT_NO_THROW(q(1, 1, 1, 1, 6));
}

TEST(QField, MixedFieldsThrow) {
  EXPECT_THROW(q(0, 1, 1, 1, 2) + q(0, 1, 1, 1, 3), Error);
  EXPECT_NO_THROW(q(0, 1, 1, 1, 2) + QReal::integer(3));
}

TEST(QField, FieldIdentities) {
  const QReal r5 = qsqrt(5);
  EXPECT_EQ(r5 * r5, QReal::integer(5));
  const QReal alpha = default_alpha();
  EXPECT_EQ(alpha * alpha.reciprocal(), QReal::integer(1));
  // alpha = sqrt5 - 2 solves x^2 + 4x - 1 = 0.
  EXPECT_EQ(alpha * alpha + QReal::integer(4) * alpha, QReal::integer(1));
  EXPECT_EQ(qsqrt(12), q(0, 1, 2, 1, 3));
  EXPECT_EQ(qsqrt(49), QReal::integer(7));
}

// Signs and orders against 1024-bit floats on random near-cancelling pairs.
TEST(QField, CompareMatchesHighPrecision) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 2000; ++t) {
    const std::int64_t d = std::vector<std::int64_t>{2, 3, 5, 7, 10, 1000003}[rng() % 6];
    const long bn = static_cast<long>(rng() % 20001) - 10000;
    const long bd = static_cast<long>(rng() % 97) + 1;
    // a close to -b sqrt d so that cancellation is severe
    const double approx = -static_cast<double>(bn) / bd * std::sqrt(static_cast<double>(d));
    const long ad = static_cast<long>(rng() % 1000) + 1;
    const long an = static_cast<long>(std::llround(approx * ad)) + static_cast<long>(rng() % 3) - 1;
    const QReal x = q(an, ad, bn, bd, d);
    const int s = x.sign();
    const mpf_class v = oracle::value(x);
    EXPECT_EQ(s, sgn(v)) << to_exact_string(x);
  }
}

TEST(QField, FloorAndFracMatchOracle) {
  std::mt19937_64 rng(11);
  const QReal alpha = default_alpha();
  for (int t = 0; t < 300; ++t) {
    BigInt m = BigInt(static_cast<unsigned long>(rng()));
    m *= BigInt(static_cast<unsigned long>(rng()));  // up to ~2^128
    const QReal f = frac_multiple(alpha, m);
    mpf_class v = oracle::value(alpha) * mpf_class(m, oracle::kBits);
    const mpf_class ref = oracle::frac(v);
    EXPECT_NEAR(to_double(f), ref.get_d(), 1e-12);
    EXPECT_GE(f.sign(), 0);
    EXPECT_TRUE(f < QReal::integer(1));
  }
  EXPECT_EQ(floor_qreal(q(-1, 2, 0, 1, 5)), BigInt(-1));
  EXPECT_EQ(floor_qreal(qsqrt(2) * QReal::integer(-1)), BigInt(-2));
  EXPECT_EQ(ceil_qreal(qsqrt(2)), BigInt(2));
}

TEST(QField, ContinuedFractionOfDefaultAlpha) {
  const ContinuedFraction cf = continued_fraction(default_alpha(), 12);
  ASSERT_GE(cf.terms.size(), 13u);
  EXPECT_EQ(cf.terms[0], 0);
  for (std::size_t i = 1; i <= 12; ++i) EXPECT_EQ(cf.terms[i], 4) << i;
  EXPECT_EQ(cf.period_length, 1u);
  EXPECT_FALSE(cf.rational);
}

TEST(QField, RationalExpansionTerminates) {
  const ContinuedFraction cf = continued_fraction(QReal::rational(Rational(17, 72)), 20);
  EXPECT_TRUE(cf.rational);
  EXPECT_EQ(cf.terms, (std::vector<BigInt>{0, 4, 4, 4}));
}

// Convergent denominators against the classical recurrence on partial
// quotients read from a 1024-bit float expansion.
TEST(QField, ConvergentsMatchFloatExpansion) {
  const QReal x = q(1, 2, 1, 2, 13);  // (1 + sqrt 13) / 2
  const auto conv = convergents(x, 25);
  mpf_class v = oracle::value(x);
  BigInt p0 = 1, q0 = 0, p1, q1;
  for (std::size_t i = 0; i <= 25; ++i) {
    mpf_class a(0, oracle::kBits);
    mpf_floor(a.get_mpf_t(), v.get_mpf_t());
    const BigInt ai(a);
    if (i == 0) {
      p1 = ai;
      q1 = 1;
    } else {
      const BigInt p2 = ai * p1 + p0, q2 = ai * q1 + q0;
      p0 = p1;
      q0 = q1;
      p1 = p2;
      q1 = q2;
    }
    EXPECT_EQ(conv[i].p, p1) << i;
    EXPECT_EQ(conv[i].q, q1) << i;
    v = 1 / (v - a);
  }
}

TEST(QField, BadlyApproximableConstant) {
  // q_k |q_k alpha - p_k| tends to 1/sqrt(20) for partial quotients 4.
  const QReal c = badly_approximable_constant(default_alpha(), 30);
  EXPECT_NEAR(to_double(c), 0.2229123600033649, 1e-15);
}

TEST(QField, DecimalFormatting) {
  EXPECT_EQ(to_decimal(QReal::rational(Rational(1, 1010)), 6), "0.000990099");
  EXPECT_EQ(to_decimal(QReal::rational(Rational(1, 8)), 18), "0.125");
  EXPECT_EQ(to_decimal(QReal::integer(-42)), "-42");
  EXPECT_EQ(to_decimal(QReal::rational(Rational(2, 3)), 3), "0.667");
  EXPECT_EQ(to_decimal(QReal::rational(Rational(1, 3000000)), 3), "3.33e-7");
  EXPECT_EQ(to_decimal(default_alpha(), 18), "0.236067977499789696");
}

TEST(QField, ExactStringRoundTrip) {
  EXPECT_EQ(to_exact_string(default_alpha()), "-2:1:5");
  EXPECT_EQ(to_exact_string(q(3, 4, -1, 6, 7)), "3/4:-1/6:7");
}

}  // namespace

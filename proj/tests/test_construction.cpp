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

#include <cstdlib>
#include <random>

#include "oracle.hpp"
#include "skewlab/construction.hpp"

using namespace skewlab;

namespace {

QReal r(long n, long d) { return QReal::rational(Rational(n, d)); }

// q_n for the partial quotients 0; 4, 4, ... by the bare recurrence.
BigInt q_index(std::size_t n) {
  BigInt a = 1, b = 4;  // q_0, q_1
  if (n == 0) return a;
  for (std::size_t i = 1; i < n; ++i) {
    const BigInt c = 4 * b + a;
    a = b;
    b = c;
  }
  return b;
}

double frac_of(const BigInt& m) {
  const mpf_class alpha = oracle::value(default_alpha());
  return oracle::frac(alpha * mpf_class(m, oracle::kBits)).get_d();
}

class Linear : public ::testing::Test {
 protected:
  Construction c2 = Construction::build(default_alpha(), IndexMaps::preset("linear"), 2);
  Construction c1 = Construction::build(default_alpha(), IndexMaps::preset("linear"), 1);
};

TEST_F(Linear, SequencesMatchRecurrence) {
  EXPECT_EQ(c2.c(1), 17);
  EXPECT_EQ(c2.c(2), 5473);
  EXPECT_EQ(c2.b(1), 305);
  EXPECT_EQ(c2.b(2), 98209);
  for (std::size_t k = 1; k <= 3; ++k) {
    EXPECT_EQ(c2.c(k), q_index(4 * k - 2)) << k;
    EXPECT_EQ(c2.b(k), q_index(4 * k)) << k;
    EXPECT_NEAR(to_double(c2.gamma(k)), frac_of(c2.c(k)), 1e-15);
    EXPECT_NEAR(to_double(c2.beta(k)), frac_of(c2.b(k)), 1e-15);
  }
  EXPECT_NEAR(to_double(c2.gamma(1)), 0.0131556, 1e-7);
  EXPECT_NEAR(to_double(c2.gamma(2)), 4.086e-5, 1e-8);
  EXPECT_NEAR(to_double(c2.theta_K()), 0.0131965, 1e-7);
  EXPECT_NEAR(to_double(c2.y(1)), 0.2368011, 1e-7);
}

TEST_F(Linear, Invariants) {
  for (std::size_t k = 1; k <= 2; ++k) {
    EXPECT_TRUE(c2.gamma(k + 1) < c2.gamma(k));
    EXPECT_TRUE(c2.beta(k + 1) < c2.beta(k));
    EXPECT_EQ(c2.theta(k - 1) + c2.gamma(k), c2.theta(k));
  }
  EXPECT_EQ(c2.theta_K(), frac_multiple(default_alpha(), c2.c_sum(2)));
  EXPECT_EQ(c2.tail_c(), QReal::rational(Rational(BigInt(2), q_index(4 * 3 - 2 + 1))));
  // The first omitted gamma sits inside the tail bound.
  EXPECT_TRUE(c2.gamma(3) < c2.tail_c());
  EXPECT_TRUE(c2.beta(3) < c2.tail_b());
}

TEST_F(Linear, DepthOneArcsAreDisjoint) {
  const Arc j = c1.J_k(1);
  const Arc shifted = c1.shifted_J_k(c1.y(1), 1);
  EXPECT_NEAR(to_double(j.length()), 0.0131556, 1e-7);
  EXPECT_NEAR(to_double(shifted.lo().value()), 0.2368011, 1e-7);
  EXPECT_NEAR(to_double(shifted.end()), 0.2499567, 1e-7);
  ArcUnion u;
  u.insert(j);
  u.insert(shifted);
  EXPECT_EQ(u.measure(), j.length() + shifted.length());
}

TEST_F(Linear, LevelBounds) {
  const auto& lb = c2.level_bounds();
  ASSERT_FALSE(lb.empty());
  EXPECT_EQ(lb[0].c_bound, QReal::integer(305) * c2.gamma(2));
  EXPECT_NEAR(to_double(lb[0].c_bound), 305 * frac_of(5473), 1e-15);
  EXPECT_NEAR(to_double(lb[0].c_bound), 0.01246, 1e-5);
  const GrowthReport g = validate_growth(c2);
  EXPECT_TRUE(g.passed) << (g.issues.empty() ? "" : g.issues.front());
  EXPECT_TRUE(g.rows[0].skew_prerequisite);
}

TEST_F(Linear, Membership) {
  EXPECT_EQ(membership_J(c2, CirclePoint()), Membership3::In);
  EXPECT_EQ(membership_J(c2, CirclePoint(r(1, 2))), Membership3::Out);
  EXPECT_EQ(membership_J(c2, CirclePoint(c2.theta_K() + c2.gamma(3))), Membership3::Uncertain);
  EXPECT_EQ(membership_J(c2, CirclePoint(c2.theta_K() + c2.tail_c())), Membership3::Out);
  // Bands never leak outside [theta_K, theta_K + tail_c).
  std::mt19937_64 rng(5);
  for (int t = 0; t < 2000; ++t) {
    const QReal p = r(static_cast<long>(rng() % 1000003), 1000003);
    const Membership3 m = membership_J(c2, CirclePoint(p));
    const bool band = p >= c2.theta_K() && p < c2.theta_K() + c2.tail_c();
    if (!band) EXPECT_NE(m, Membership3::Uncertain);
  }
}

TEST_F(Linear, ExceptionalSetsByDefinition) {
  const QReal inside = c2.y(0) + c2.beta(1) * r(1, 2);  // interior of [y_0, y_1)
  EXPECT_TRUE(in_B(c2, 1, rotate(CirclePoint(inside), default_alpha())));
  EXPECT_FALSE(in_B(c2, 1, CirclePoint(r(1, 2))));
  const QReal c_base = c2.theta(1) + c2.gamma(2) * r(1, 3);
  EXPECT_TRUE(in_C(c2, 1, rotate(CirclePoint(c_base), default_alpha())));
  // Past the range: R^{18} of a base point is not in B_1 unless another hit occurs.
  std::int64_t direct = 0;
  for (std::int64_t l = 1; l <= 17; ++l) {
    CirclePoint p(inside + default_alpha() * QReal::integer(l));
    direct += in_B(c2, 1, p);
  }
  EXPECT_EQ(direct, 17);
}

TEST(Construction, BudgetRefusal) {
  ::setenv("SKEWLAB_BUDGET", "1000", 1);
  const Construction c = Construction::build(default_alpha(), IndexMaps::preset("linear"), 2);
  EXPECT_THROW(in_C(c, 2, CirclePoint()), BudgetExceeded);
  ::unsetenv("SKEWLAB_BUDGET");
}

TEST(Construction, RejectsBadInput) {
  EXPECT_THROW(Construction::build(r(1, 2), IndexMaps::preset("linear"), 2), Error);
  EXPECT_THROW(Construction::build(default_alpha(), IndexMaps::preset("nope"), 2), Error);
  EXPECT_FALSE(interleaving_issues(IndexMaps::custom({2, 6}, {2, 6}), 2).empty());
  // sqrt(2) - 1 is above 1/3.
  EXPECT_THROW(Construction::build(qsqrt(2) - QReal::integer(1), IndexMaps::preset("linear"), 1),
               Error);
}

TEST(Construction, PaperPresetIsTiny) {
  const Construction c = Construction::build(default_alpha(), IndexMaps::preset("paper"), 2);
  EXPECT_TRUE(c.level_bounds()[0].c_bound < r(1, 1000000));
  EXPECT_TRUE(validate_growth(c).passed);
}

TEST(Construction, ConfigRoundTrip) {
  const ConstructionConfig cfg = parse_config(
      R"({"alpha": {"a_num": -2, "a_den": 1, "b_num": 1, "b_den": 1, "d": 5},
          "preset": "geometric", "depth": 3})");
  EXPECT_EQ(cfg.alpha, default_alpha());
  EXPECT_EQ(cfg.maps.name(), "geometric");
  EXPECT_EQ(cfg.depth, 3u);
  const ConstructionConfig again = parse_config(config_to_json(cfg));
  EXPECT_EQ(config_to_json(again), config_to_json(cfg));
  const ConstructionConfig custom =
      parse_config(R"({"alpha": "sqrt:5:-2:1", "preset": {"f": [2, 6], "g": [4, 8]}, "depth": 1})");
  EXPECT_TRUE(custom.maps.is_custom());
  EXPECT_EQ(custom.maps.f(2), 6u);
  EXPECT_THROW(parse_config("{"), Error);
  EXPECT_THROW(parse_config(R"({"depth": 0})"), Error);
  EXPECT_EQ(parse_alpha_spec("sqrt:5:-2:1"), default_alpha());
  EXPECT_EQ(parse_alpha_spec("sqrt:5:-08/4:1"), default_alpha());
  EXPECT_THROW(parse_alpha_spec("sqrt:4:1:1"), Error);
  EXPECT_THROW(parse_alpha_spec("cbrt:5:1:1"), Error);
}

}  // namespace

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

#include "oracle.hpp"
#include "skewlab/dynamics.hpp"

using namespace skewlab;

namespace {

QReal r(long n, long d) { return QReal::rational(Rational(n, d)); }

const Construction& linear2() {
  static const Construction c =
      Construction::build(default_alpha(), IndexMaps::preset("linear"), 2);
  return c;
}

std::vector<SystemSpec> all_specs() {
  using K = SystemKind;
  return {{K::Tk, 1}, {K::Tk, 2},     {K::Sk, 1},  {K::Sk, 2},        {K::Ttrunc, 2},
          {K::That_k, 1}, {K::Shat_k, 1}, {K::Fk, 1}, {K::Fk, 2, true}, {K::ThatTrunc, 2},
          {K::G, 1},  {K::F2, 1}};
}

// The engine against one-step-at-a-time QReal arithmetic, both directions.
TEST(Engine, MatchesReferenceStepForEverySystem) {
  const std::vector<CirclePoint> starts = {CirclePoint(), CirclePoint(r(3, 10)),
                                           CirclePoint(linear2().theta_K())};
  for (const SystemSpec& spec : all_specs()) {
    const SkewSystem sys(linear2(), spec);
    for (const CirclePoint& x0 : starts) {
      SkewState ref{x0, 0, false};
      Orbit orb = make_orbit(sys, ref);
      for (int n = 1; n <= 400; ++n) {
        ref = step(sys, ref);
        orb.forward();
        ASSERT_EQ(orb.x(), ref.x.value()) << to_string(spec.kind) << " n=" << n;
        ASSERT_EQ(orb.fiber(), ref.h) << to_string(spec.kind) << " n=" << n;
        ASSERT_EQ(orb.uncertain(), ref.uncertain) << to_string(spec.kind) << " n=" << n;
      }
      for (int n = 1; n <= 400; ++n) {
        ref = step_back(sys, ref);
        orb.backward();
        ASSERT_EQ(orb.x(), ref.x.value());
        ASSERT_EQ(orb.fiber(), ref.h);
      }
      EXPECT_EQ(orb.x(), x0.value());
      EXPECT_EQ(orb.time(), 0);
    }
  }
}

TEST(Engine, StepBackInvertsStep) {
  const SkewSystem sys(linear2(), {SystemKind::Fk, 2});
  SkewState s{CirclePoint(r(1, 7)), 5, false};
  for (int n = 0; n < 100; ++n) {
    const SkewState t = step(sys, s);
    EXPECT_EQ(step_back(sys, t).x, s.x);
    EXPECT_EQ(step_back(sys, t).h, s.h);
    s = t;
  }
}

TEST(Engine, PromotesToBigIntegersWithoutChangingTheOrbit) {
  // alpha ~ 1e-6 with a huge discriminant; x0 with a large denominator.
  const QReal alpha = (qsqrt(1000000000004LL) - QReal::integer(1000000)) * r(1, 2);
  const QReal cut = alpha * QReal::integer(123457) + r(1, 999999937);
  const PiecewiseFunction f({QReal::integer(0), frac(cut)}, {Piece{1}, Piece{-2}});
  const QReal x0 = r(987654321, 999999937);
  Orbit orb(alpha, f, x0, FiberGroup::Z);
  QReal x = x0;
  std::int64_t h = 0;
  for (int n = 0; n < 3000; ++n) {
    h += x < frac(cut) ? 1 : -2;
    x = frac(x + alpha);
    orb.forward();
    ASSERT_EQ(orb.x(), x) << n;
    ASSERT_EQ(orb.fiber(), h) << n;
  }
  orb.reset(x0, 0);
  EXPECT_EQ(orb.x(), x0);
  EXPECT_EQ(orb.time(), 0);
}

TEST(Engine, ObserverCanStopTheRun) {
  const SkewSystem sys(linear2(), {SystemKind::Tk, 1});
  Orbit orb = make_orbit(sys, SkewState{});
  const std::int64_t done = orb.run(1000, [](const auto& core) { return core.time() < 17; });
  EXPECT_EQ(done, 17);
  EXPECT_EQ(orb.time(), 17);
}

TEST(Engine, Z2FiberStaysABit) {
  const SkewSystem sys(linear2(), {SystemKind::Tk, 1});
  const OrbitSummary s = orbit(sys, SkewState{}, 100000);
  EXPECT_EQ(s.steps, 100000);
  EXPECT_GE(s.min_fiber, 0);
  EXPECT_LE(s.max_fiber, 1);
}

TEST(Dynamics, OrbitCallbackStride) {
  const SkewSystem sys(linear2(), {SystemKind::Tk, 1});
  std::vector<std::int64_t> seen;
  orbit(sys, SkewState{}, 100, 10, [&](std::int64_t n, const SkewState&) { seen.push_back(n); });
  ASSERT_EQ(seen.size(), 11u);
  EXPECT_EQ(seen.front(), 0);
  EXPECT_EQ(seen.back(), 100);
}

TEST(Dynamics, IetConjugacy) {
  for (std::size_t k : {1u, 2u}) {
    const IetMap m = as_iet(linear2(), k);
    EXPECT_TRUE(m.bijective);
    const SkewSystem sys(linear2(), {SystemKind::Tk, k});
    SkewState s{CirclePoint(r(2, 11)), 1, false};
    for (int n = 0; n < 500; ++n) {
      const SkewState t = step(sys, s);
      ASSERT_EQ(iet_apply(m, iet_embed(s)), iet_embed(t)) << k << " " << n;
      s = t;
    }
  }
}

TEST(Dynamics, BirkhoffAgainstManualSum) {
  const std::vector<Term> f = {{Arc::between(QReal::integer(0), r(1, 3)), 2},
                               {Arc::between(r(1, 4), r(3, 4)), -1}};
  const BirkhoffSummary b = birkhoff(default_alpha(), f, CirclePoint(r(1, 5)), 1000);
  QReal x = r(1, 5);
  std::int64_t sum = 0, lo = 0, hi = 0;
  for (int n = 0; n < 1000; ++n) {
    if (x < r(1, 3)) sum += 2;
    if (x >= r(1, 4) && x < r(3, 4)) sum -= 1;
    lo = n == 0 ? sum : std::min(lo, sum);
    hi = n == 0 ? sum : std::max(hi, sum);
    x = frac(x + default_alpha());
  }
  EXPECT_EQ(b.sum, sum);
  EXPECT_EQ(b.min, lo);
  EXPECT_EQ(b.max, hi);
  EXPECT_EQ(b.N, 1000);
}

TEST(Dynamics, DisplacementFromDefinition) {
  const mpf_class alpha = oracle::value(default_alpha());
  for (long n : {1L, 4L, 17L, 72L, 100L}) {
    const mpf_class a = oracle::frac(alpha * n);
    // candidates a/2 and (a+1)/2, distance to 0 on the circle
    auto dist = [](mpf_class v) {
      v = oracle::frac(v);
      return std::min(v.get_d(), mpf_class(1 - v).get_d());
    };
    const double want = std::min(dist(a / 2), dist((a + 1) / 2));
    EXPECT_NEAR(to_double(displacement(default_alpha(), BigInt(n))), want, 1e-15) << n;
  }
  const DisplacementBound d = iet_displacement_bound(default_alpha(), 1000);
  EXPECT_EQ(d.n_max, 1000);
  EXPECT_TRUE(d.min > QReal::integer(0));
  EXPECT_EQ(d.min, QReal::integer(d.argmin) * displacement(default_alpha(), BigInt(d.argmin)));
}

TEST(Dynamics, SystemNamesRoundTrip) {
  for (const SystemSpec& spec : all_specs()) {
    EXPECT_EQ(parse_system(to_string(spec.kind)), spec.kind);
  }
  EXPECT_THROW(parse_system("bogus"), Error);
  EXPECT_EQ(fiber_group(SystemKind::Tk), FiberGroup::Z2);
  EXPECT_EQ(fiber_group(SystemKind::That_k), FiberGroup::Z);
}

}  // namespace

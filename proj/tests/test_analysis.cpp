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

#include <atomic>
#include <random>

#include "oracle.hpp"
#include "skewlab/analysis.hpp"
#include "skewlab/report.hpp"

using namespace skewlab;

namespace {

QReal r(long n, long d) { return QReal::rational(Rational(n, d)); }

const Construction& linear(std::size_t depth) {
  static const Construction c1 = Construction::build(default_alpha(), IndexMaps::preset("linear"), 1);
  static const Construction c2 = Construction::build(default_alpha(), IndexMaps::preset("linear"), 2);
  return depth == 1 ? c1 : c2;
}

TEST(ExceptionalIndex, AgreesWithFirstVisit) {
  const Construction& c = linear(2);
  const Arc base = c.J_k(2);
  for (int direction : {-1, 1}) {
    const ExceptionalIndex idx(c.alpha(), base, 5000, direction);
    std::mt19937_64 rng(11);
    int hits = 0;
    for (int t = 0; t < 3000; ++t) {
      // Half the probes sit right next to an orbit point of the base arc.
      CirclePoint p(r(static_cast<long>(rng() % 999983), 999983));
      if (t % 2) {
        const std::int64_t l = 1 + static_cast<std::int64_t>(rng() % 5000);
        p = CirclePoint(base.lo().value() - c.alpha() * QReal::integer(direction * l) +
                        (t % 4 == 1 ? QReal() : base.length()));
      }
      const bool want = first_visit(c.alpha(), base, p, 5000, direction) != 0;
      ASSERT_EQ(idx.contains(p), want) << t;
      hits += want;
    }
    EXPECT_GT(hits, 1000);
  }
}

TEST(Checks, SeparationAgainstBruteForce) {
  const mpf_class alpha = oracle::value(default_alpha());
  const std::vector<std::int64_t> ns = {1, 17, 72, 305, 10000};
  const Verdict ok = separation_check(default_alpha(), ns, 4);
  EXPECT_EQ(ok.status, Status::Verified);
  double sep = 1;
  std::size_t next = 0;
  for (long m = 1; m <= 10000; ++m) {
    const mpf_class f = oracle::frac(alpha * m);
    sep = std::min({sep, f.get_d(), mpf_class(1 - f).get_d()});
    if (m == ns[next]) {
      EXPECT_NEAR(ok.metrics.at("sep_" + std::to_string(m)), sep, 1e-15) << m;
      ++next;
    }
  }
  const Verdict bad = separation_check(default_alpha(), ns, 1);
  EXPECT_EQ(bad.status, Status::Violated);
  ASSERT_TRUE(bad.witness);
  EXPECT_EQ(bad.witness->n, 1);  // alpha < 1/2 already
  // Default C is the largest partial quotient, 4 here.
  EXPECT_EQ(separation_check(default_alpha(), ns).metrics.at("C"), 4.0);
}

TEST(Checks, DioSmallAndLiouville) {
  const Verdict one = dio_check(default_alpha(), 1);
  EXPECT_EQ(one.status, Status::Verified);
  EXPECT_EQ(one.exact.at("c_hat"), to_exact_string(default_alpha() * r(1, 2)));
  const Verdict many = dio_check(default_alpha(), 100000);
  EXPECT_EQ(many.status, Status::Verified);
  EXPECT_EQ(many.exact.at("agree"), "true");
  // 18 - 8 sqrt 5 at n = 4.
  EXPECT_EQ(many.exact.at("c_hat"),
            to_exact_string(QReal::integer(18) - QReal::integer(8) * qsqrt(5)));
  const QReal liouville = (qsqrt(1000000000004LL) - QReal::integer(1000000)) * r(1, 2);
  EXPECT_EQ(dio_check(liouville, 1000000).status, Status::Violated);
}

TEST(Checks, DensityOfASystemWithItselfIsZero) {
  const SystemSpec t1{SystemKind::Tk, 1};
  const Verdict v = disagreement_density(linear(2), t1, t1, SkewState{}, 100000);
  EXPECT_EQ(v.metrics.at("density"), 0.0);
  EXPECT_NE(v.status, Status::Violated);
}

TEST(Checks, PairBoundsOnlyForRecognisedPairs) {
  const Construction& c = linear(2);
  const auto tb = pair_bound(c, {SystemKind::Tk, 1}, {SystemKind::Sk, 2});
  ASSERT_TRUE(tb);
  EXPECT_EQ(tb->bound, QReal::integer(305) * c.gamma(2));
  EXPECT_EQ(tb->shifts, BigInt(305));
  const auto sb = pair_bound(c, {SystemKind::Sk, 1}, {SystemKind::Tk, 1});
  ASSERT_TRUE(sb);
  EXPECT_EQ(sb->bound, QReal::integer(17) * c.beta(1));
  EXPECT_FALSE(pair_bound(c, {SystemKind::Tk, 1}, {SystemKind::Tk, 2}));
}

TEST(Checks, JFirstAndSwap) {
  EXPECT_EQ(check_j_first(linear(2), 100000).status, Status::Verified);
  const Verdict swapped = check_j_first(linear(2), 1000, true);
  EXPECT_EQ(swapped.status, Status::Violated);
  ASSERT_TRUE(swapped.witness);
  EXPECT_EQ(swapped.witness->n, 1);
}

TEST(Checks, SmallShiftPerturbed) {
  EXPECT_EQ(check_small_shift(linear(2), 1, 1000).status, Status::Verified);
  const Verdict v = check_small_shift(linear(2), 1, 1000, 1);
  EXPECT_EQ(v.status, Status::Violated);
  EXPECT_EQ(v.witness->n, 1);
}

TEST(Occupancy, FullProbeMarginalsAndSheetSymmetry) {
  const OccupancyProbe probe{Arc::full(), 0};
  const Verdict v = occupancy(linear(1), {SystemKind::Tk, 1}, probe, {1000, 20000});
  for (const char* n : {"_1000", "_20000"}) {
    const std::string s(n);
    EXPECT_EQ(v.metrics.at("marginal00" + s), 1.0);
    EXPECT_EQ(v.metrics.at("marginal01" + s), 1.0);
    // Swapping sheets maps one start onto the other.
    EXPECT_NEAR(v.metrics.at("nu01" + s), 1.0 - v.metrics.at("nu00" + s), 1e-12);
  }
}

// Union of T^{-i} B(y, a_i) by pushing a grid forward with the reference step.
double grid_measure(const Construction& c, const ShrinkTarget& t, const ShrinkRule& rule,
                    int grid) {
  const SkewSystem sys(c, SystemSpec{SystemKind::Ttrunc});
  std::int64_t hits = 0;
  for (int s = 0; s < 2; ++s) {
    for (int g = 0; g < grid; ++g) {
      SkewState st{CirclePoint(QReal::rational(Rational(2 * g + 1, 2 * grid))), s};
      for (std::int64_t i = 1; i <= rule.M; ++i) {
        st = step(sys, st);
        if (i >= rule.N && st.h == t.sheet && circle_dist(st.x, t.y) < rule.radius(i)) {
          ++hits;
          break;
        }
      }
    }
  }
  return static_cast<double>(hits) / grid;
}

TEST(Shrink, ExactAgreesWithGridPullback) {
  ShrinkRule rule;
  rule.scale = r(1, 5);
  rule.N = 2;
  rule.M = 12;
  const ShrinkTarget t{CirclePoint(r(2, 7)), 1};
  const ShrinkExact e = shrink_exact(linear(1), t, rule);
  EXPECT_NEAR(to_double(e.measure), grid_measure(linear(1), t, rule, 4000), 2e-3);
}

TEST(Shrink, WholeCircleRadii) {
  // Every point of the target sheet is hit; the other sheet only where the
  // orbit switches sheets within M steps.
  ShrinkRule rule;
  rule.kind = ShrinkRule::Kind::Custom;
  rule.N = 1;
  rule.M = 40;
  rule.custom.assign(40, QReal::integer(1));
  const ShrinkTarget t{CirclePoint(r(1, 3)), 0};
  const ShrinkExact e = shrink_exact(linear(1), t, rule);
  EXPECT_TRUE(e.measure >= QReal::integer(1));
  EXPECT_NEAR(to_double(e.measure), grid_measure(linear(1), t, rule, 4000), 2e-3);
}

TEST(Shrink, MonotoneAndPermutationInvariant) {
  ShrinkRule rule;
  rule.scale = r(1, 10);
  rule.N = 1;
  rule.M = 500;
  const ShrinkTarget t{CirclePoint(r(5, 9)), 0};
  const ShrinkExact e = shrink_exact(linear(2), t, rule, {10, 100, 500});
  ASSERT_EQ(e.prefix.size(), 3u);
  EXPECT_TRUE(e.prefix[0].second <= e.prefix[1].second);
  EXPECT_TRUE(e.prefix[1].second <= e.prefix[2].second);
  EXPECT_EQ(e.prefix[2].second, e.measure);
  // Checkpoint order does not matter.
  EXPECT_EQ(shrink_exact(linear(2), t, rule, {500, 10, 100}).measure, e.measure);
  ShrinkRule bad = rule;
  bad.kind = ShrinkRule::Kind::Custom;
  bad.M = 2;
  bad.custom = {r(1, 10), r(1, 5)};
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Shrink, EstimateDoesNotDependOnJobs) {
  ShrinkRule rule;
  rule.scale = r(1, 10);
  rule.M = 200;
  const ShrinkTarget t = random_target(42, 0);
  const ShrinkEstimate a = shrink_estimate(linear(2), t, rule, 3000, 7, 1);
  const ShrinkEstimate b = shrink_estimate(linear(2), t, rule, 3000, 7, 3);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_EQ(a.uncertain, b.uncertain);
  EXPECT_EQ(a.measure, b.measure);
  const ShrinkExact e = shrink_exact(linear(2), t, rule);
  EXPECT_LE(std::fabs(a.measure - to_double(e.measure)),
            4 * a.stderr_ + to_double(e.uncertain_measure));
}

TEST(Parallel, ShardsCoverRangeOnceAndRethrow) {
  std::vector<std::atomic<int>> seen(1001);
  parallel_shards(1001, 4, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) ++seen[static_cast<std::size_t>(i)];
  });
  for (const auto& s : seen) EXPECT_EQ(s.load(), 1);
  EXPECT_THROW(parallel_shards(10, 2, [](std::int64_t b, std::int64_t) {
                 if (b > 0) throw Error("boom");
               }),
               Error);
}

TEST(Halfstrip, JobsDoNotChangeTheVerdict) {
  HalfstripOptions opt;
  opt.N = 20000;
  opt.early = 1000;
  opt.count = 6;
  const auto samples = sample_points(5, 40);
  opt.jobs = 1;
  const Verdict a = halfstrip_scan(linear(2), {SystemKind::ThatTrunc}, samples, opt);
  opt.jobs = 3;
  const Verdict b = halfstrip_scan(linear(2), {SystemKind::ThatTrunc}, samples, opt);
  const ReportContext ctx{"{}", "halfstrip", 0};
  EXPECT_EQ(verdict_json(a, ctx), verdict_json(b, ctx));
}

TEST(Report, DeterministicAndExitCodes) {
  const Verdict v = check_j_first(linear(1), 2000);
  const ReportContext ctx{config_to_json(ConstructionConfig{}), "N=2000", 3};
  const std::string one = verdict_json(v, ctx);
  EXPECT_EQ(one, verdict_json(check_j_first(linear(1), 2000), ctx));
  EXPECT_NE(one.find("\"config_digest\""), std::string::npos);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  Verdict bad;
  bad.status = Status::Violated;
  Verdict none;
  none.status = Status::NoCertificate;
  EXPECT_EQ(exit_code({v}), 0);
  EXPECT_EQ(exit_code({v, none}), 3);
  EXPECT_EQ(exit_code({none, bad}), 1);
}

}  // namespace

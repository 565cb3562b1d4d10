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

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "skewlab/circle.hpp"

using namespace skewlab;

namespace {

QReal r(long n, long d) { return QReal::rational(Rational(n, d)); }
CirclePoint pt(long n, long d) { return CirclePoint(r(n, d)); }

TEST(Circle, PointsReduceModOne) {
  EXPECT_EQ(pt(5, 4), pt(1, 4));
  EXPECT_EQ(pt(-1, 4), pt(3, 4));
  EXPECT_EQ(rotate(pt(3, 4), r(1, 2)), pt(1, 4));
}

TEST(Circle, ArcContainmentIsHalfOpen) {
  const Arc a(pt(1, 4), r(1, 2));
  EXPECT_TRUE(arc_contains(a, pt(1, 4)));
  EXPECT_FALSE(arc_contains(a, pt(3, 4)));
  const Arc w(pt(3, 4), r(1, 2));  // wraps through 0
  EXPECT_TRUE(w.wraps());
  EXPECT_TRUE(arc_contains(w, pt(0, 1)));
  EXPECT_TRUE(arc_contains(w, pt(9, 10)));
  EXPECT_FALSE(arc_contains(w, pt(1, 4)));
  EXPECT_FALSE(arc_contains(Arc(pt(1, 3), r(0, 1)), pt(1, 3)));
  EXPECT_TRUE(arc_contains(Arc::full(), pt(1, 3)));
  EXPECT_THROW(Arc(pt(0, 1), r(3, 2)), Error);
}

TEST(Circle, Distance) {
  EXPECT_EQ(circle_dist(pt(1, 10), pt(9, 10)), r(1, 5));
  EXPECT_EQ(circle_dist(pt(1, 4), pt(3, 4)), r(1, 2));
}

// Union measure against counting a fine rational grid: every endpoint lies
// on the grid, so grid counts are exact.
TEST(Circle, UnionMeasureMatchesGridCount) {
  constexpr long kGrid = 240;
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    ArcUnion u;
    std::vector<Arc> arcs;
    const int n = static_cast<int>(rng() % 6) + 1;
    for (int i = 0; i < n; ++i) {
      const long lo = static_cast<long>(rng() % kGrid);
      const long len = static_cast<long>(rng() % (kGrid / 3));
      arcs.emplace_back(pt(lo, kGrid), r(len, kGrid));
      u = union_insert(u, arcs.back());
    }
    long covered = 0;
    for (long g = 0; g < kGrid; ++g) {
      const CirclePoint p = pt(g, kGrid);
      const bool in = std::any_of(arcs.begin(), arcs.end(),
                                  [&](const Arc& a) { return arc_contains(a, p); });
      EXPECT_EQ(in, u.contains(p));
      covered += in;
    }
    EXPECT_EQ(union_measure(u), r(covered, kGrid));
  }
}

TEST(Circle, UnionOrderInvariant) {
  std::vector<Arc> arcs{Arc(pt(9, 10), r(1, 5)), Arc(pt(1, 5), r(1, 10)), Arc(pt(1, 20), r(1, 5)),
                        Arc(pt(1, 2), r(1, 4))};
  ArcUnion a, b;
  for (const auto& x : arcs) a.insert(x);
  for (auto it = arcs.rbegin(); it != arcs.rend(); ++it) b.insert(*it);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(a.measure(), r(13, 20));  // [0.9,1) + [0,0.3) + [0.5,0.75)
}

TEST(Circle, FullCircleUnion) {
  ArcUnion u;
  u.insert(Arc(pt(1, 2), r(1, 2)));
  u.insert(Arc(pt(0, 1), r(1, 2)));
  EXPECT_EQ(u.measure(), r(1, 1));
  EXPECT_TRUE(u.contains(pt(1, 3)));
}

// Separation and gaps against an all-pairs scan.
TEST(Circle, SeparationAndGapMatchBruteForce) {
  const QReal alpha = make_qreal(BigInt(-2), BigInt(1), BigInt(1), BigInt(1), 5);
  std::vector<CirclePoint> pts;
  QReal x;
  for (int i = 0; i < 60; ++i) {
    pts.emplace_back(x);
    x = frac(x + alpha);
  }
  QReal best = QReal::integer(1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = min(best, circle_dist(pts[i], pts[j]));
  }
  EXPECT_EQ(separation(pts), best);

  std::vector<QReal> sorted;
  for (const auto& p : pts) sorted.push_back(p.value());
  std::sort(sorted.begin(), sorted.end(), [](const QReal& a, const QReal& b) { return a < b; });
  QReal gap = sorted.front() + QReal::integer(1) - sorted.back();
  for (std::size_t i = 1; i < sorted.size(); ++i) gap = max(gap, sorted[i] - sorted[i - 1]);
  EXPECT_EQ(max_gap(pts), gap);
  EXPECT_THROW(separation(std::vector<CirclePoint>{pt(0, 1)}), Error);
}

}  // namespace

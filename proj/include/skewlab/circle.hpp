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

#ifndef SKEWLAB_CIRCLE_HPP
#define SKEWLAB_CIRCLE_HPP

#include <span>
#include <vector>

#include "skewlab/qfield.hpp"

namespace skewlab {

/// A point of the unit circle [0, 1).
class CirclePoint {
 public:
  CirclePoint() = default;
  explicit CirclePoint(const QReal& x) : x_(frac(x)) {}

  const QReal& value() const { return x_; }

  friend bool operator==(const CirclePoint& p, const CirclePoint& q) { return p.x_ == q.x_; }

 private:
  QReal x_;
};

/// Half-open arc [lo, lo + len) mod 1. len == 0 is empty, len == 1 the
/// whole circle.
class Arc {
 public:
  Arc() = default;
  Arc(CirclePoint lo, QReal length);

  /// The arc running counter-clockwise from lo to hi (empty when lo == hi).
  static Arc between(const QReal& lo, const QReal& hi);
  static Arc full();

  const CirclePoint& lo() const { return lo_; }
  const QReal& length() const { return len_; }
  /// lo + len, possibly >= 1 when the arc wraps.
  QReal end() const { return lo_.value() + len_; }

  bool is_empty() const { return len_.sign() == 0; }
  bool is_full() const;
  bool wraps() const;

  friend bool operator==(const Arc& x, const Arc& y) {
    return x.lo_ == y.lo_ && x.len_ == y.len_;
  }

 private:
  CirclePoint lo_;
  QReal len_;
};

CirclePoint rotate(const CirclePoint& p, const QReal& alpha);

bool arc_contains(const Arc& a, const CirclePoint& p);

/// min(|x - y|, 1 - |x - y|).
QReal circle_dist(const CirclePoint& p, const CirclePoint& q);

/// Canonical finite union of arcs: disjoint, sorted by lo, touching arcs
/// merged (including across 0).
class ArcUnion {
 public:
  ArcUnion() = default;

  void insert(const Arc& a);
  bool contains(const CirclePoint& p) const;
  QReal measure() const;
  std::vector<Arc> arcs() const;
  bool empty() const { return segments_.empty(); }

  friend bool operator==(const ArcUnion& x, const ArcUnion& y) {
    return x.segments_ == y.segments_;
  }

 private:
  struct Segment {
    QReal lo;  // 0 <= lo < hi <= 1
    QReal hi;
    friend bool operator==(const Segment& x, const Segment& y) {
      return x.lo == y.lo && x.hi == y.hi;
    }
  };
  void insert_segment(QReal lo, QReal hi);

  std::vector<Segment> segments_;
};

ArcUnion union_insert(ArcUnion u, const Arc& a);
QReal union_measure(const ArcUnion& u);

/// Minimum pairwise circle distance; needs at least two points.
QReal separation(std::span<const CirclePoint> points);

/// Largest empty arc between circularly consecutive points.
QReal max_gap(std::span<const CirclePoint> points);

}  // namespace skewlab

#endif  // SKEWLAB_CIRCLE_HPP

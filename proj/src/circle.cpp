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

#include "skewlab/circle.hpp"

#include <algorithm>

namespace skewlab {

namespace {
const QReal kOne = QReal::integer(1);
}

Arc::Arc(CirclePoint lo, QReal length) : lo_(std::move(lo)), len_(std::move(length)) {
  if (len_.sign() < 0 || len_ > kOne) throw Error("arc length must lie in [0, 1]");
}

Arc Arc::between(const QReal& lo, const QReal& hi) {
  QReal len = hi - lo;
  if (len.sign() < 0) len += kOne;
  return Arc(CirclePoint(lo), len);
}

Arc Arc::full() { return Arc(CirclePoint(), kOne); }

bool Arc::is_full() const { return len_ == kOne; }

bool Arc::wraps() const { return end() > kOne; }

CirclePoint rotate(const CirclePoint& p, const QReal& alpha) {
  QReal x = p.value() + alpha;
  if (x >= kOne) x -= kOne;
  return CirclePoint(x);
}

bool arc_contains(const Arc& a, const CirclePoint& p) {
  if (a.is_empty()) return false;
  if (a.is_full()) return true;
  QReal t = p.value() - a.lo().value();
  if (t.sign() < 0) t += kOne;
  return t < a.length();
}

QReal circle_dist(const CirclePoint& p, const CirclePoint& q) {
  const QReal diff = abs(p.value() - q.value());
  return min(diff, kOne - diff);
}

void ArcUnion::insert_segment(QReal lo, QReal hi) {
  // Absorb every segment that overlaps or touches [lo, hi).
  auto first = std::lower_bound(segments_.begin(), segments_.end(), lo,
                                [](const Segment& s, const QReal& v) { return s.hi < v; });
  auto last = first;
  while (last != segments_.end() && last->lo <= hi) {
    if (last->lo < lo) lo = last->lo;
    if (last->hi > hi) hi = last->hi;
    ++last;
  }
  first = segments_.erase(first, last);
  segments_.insert(first, Segment{std::move(lo), std::move(hi)});
}

void ArcUnion::insert(const Arc& a) {
  if (a.is_empty()) return;
  if (a.is_full()) {
    segments_.assign(1, Segment{QReal(), kOne});
    return;
  }
  const QReal end = a.end();
  if (end > kOne) {
    insert_segment(a.lo().value(), kOne);
    insert_segment(QReal(), end - kOne);
  } else {
    insert_segment(a.lo().value(), end);
  }
}

bool ArcUnion::contains(const CirclePoint& p) const {
  const QReal& x = p.value();
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](const QReal& v, const Segment& s) { return v < s.lo; });
  if (it == segments_.begin()) return false;
  --it;
  return x < it->hi;
}

QReal ArcUnion::measure() const {
  QReal total;
  for (const auto& s : segments_) total += s.hi - s.lo;
  return total;
}

std::vector<Arc> ArcUnion::arcs() const {
  std::vector<Arc> out;
  if (segments_.empty()) return out;
  if (segments_.size() == 1 && segments_.front().lo.sign() == 0 && segments_.front().hi == kOne) {
    out.push_back(Arc::full());
    return out;
  }
  std::size_t begin = 0;
  std::size_t end = segments_.size();
  const bool joins = segments_.size() > 1 && segments_.front().lo.sign() == 0 &&
                     segments_.back().hi == kOne;
  if (joins) {
    ++begin;
    --end;
  }
  for (std::size_t i = begin; i < end; ++i) {
    out.emplace_back(CirclePoint(segments_[i].lo), segments_[i].hi - segments_[i].lo);
  }
  if (joins) {
    const auto& tail = segments_.back();
    const auto& head = segments_.front();
    out.emplace_back(CirclePoint(tail.lo), (kOne - tail.lo) + head.hi);
  }
  return out;
}

ArcUnion union_insert(ArcUnion u, const Arc& a) {
  u.insert(a);
  return u;
}

QReal union_measure(const ArcUnion& u) { return u.measure(); }

namespace {
std::vector<QReal> sorted_values(std::span<const CirclePoint> points) {
  std::vector<QReal> v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back(p.value());
  std::sort(v.begin(), v.end());
  return v;
}
}  // namespace

QReal separation(std::span<const CirclePoint> points) {
  if (points.size() < 2) throw Error("separation needs at least two points");
  const auto v = sorted_values(points);
  QReal best = kOne - v.back() + v.front();
  for (std::size_t i = 1; i < v.size(); ++i) {
    QReal gap = v[i] - v[i - 1];
    if (gap < best) best = std::move(gap);
  }
  return best;
}

QReal max_gap(std::span<const CirclePoint> points) {
  if (points.empty()) return kOne;
  const auto v = sorted_values(points);
  QReal best = kOne - v.back() + v.front();
  for (std::size_t i = 1; i < v.size(); ++i) {
    QReal gap = v[i] - v[i - 1];
    if (gap > best) best = std::move(gap);
  }
  return best;
}

}  // namespace skewlab

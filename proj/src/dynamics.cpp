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

#include "skewlab/dynamics.hpp"

#include <algorithm>
#include <array>

namespace skewlab {

namespace {

const QReal kOne = QReal::integer(1);
const QReal kHalf = QReal::rational(Rational(1, 2));

constexpr std::array<std::pair<SystemKind, const char*>, 9> kNames{{
    {SystemKind::Tk, "Tk"},
    {SystemKind::Sk, "Sk"},
    {SystemKind::Ttrunc, "Ttrunc"},
    {SystemKind::That_k, "That_k"},
    {SystemKind::Shat_k, "Shat_k"},
    {SystemKind::Fk, "Fk"},
    {SystemKind::ThatTrunc, "ThatTrunc"},
    {SystemKind::G, "G"},
    {SystemKind::F2, "F2"},
}};

Arc shifted(const Arc& a, const QReal& by) { return Arc(CirclePoint(a.lo().value() + by), a.length()); }

void append_level_that(std::vector<Term>& t, const Construction& c, std::size_t k) {
  const Arc band = c.theta_band(k);
  t.push_back(Term{band, +1});
  t.push_back(Term{shifted(band, c.y(k)), -1});
}

void append_level_shat(std::vector<Term>& t, const Construction& c, std::size_t k) {
  const Arc band = c.y_band(k);
  t.push_back(Term{band, +1});
  t.push_back(Term{shifted(band, c.theta(k)), -1});
}

std::vector<Term> build_terms(const Construction& c, const SystemSpec& spec) {
  if (uses_level(spec.kind) && (spec.k < 1 || spec.k > c.depth())) {
    throw Error("level k=" + std::to_string(spec.k) + " outside [1, depth=" +
                std::to_string(c.depth()) + "]");
  }
  const std::size_t k = spec.k;
  std::vector<Term> t;
  switch (spec.kind) {
    case SystemKind::Tk:
      t.push_back(Term{c.J_k(k), 1});
      t.push_back(Term{c.shifted_J_k(c.y(k), k), 1});
      break;
    case SystemKind::Sk:
      t.push_back(Term{c.J_k(k), 1});
      t.push_back(Term{c.shifted_J_k(c.y(k - 1), k), 1});
      break;
    case SystemKind::Ttrunc:
      append_limit_terms(t, c.J(), 1);
      append_limit_terms(t, c.Jprime(), 1);
      break;
    case SystemKind::That_k:
      append_level_that(t, c, k);
      break;
    case SystemKind::Shat_k:
      append_level_shat(t, c, k);
      break;
    case SystemKind::Fk:
      for (std::size_t l = spec.fk_all_levels ? 1 : k; l <= k; ++l) {
        append_level_that(t, c, l);
        append_level_shat(t, c, l);
      }
      break;
    case SystemKind::ThatTrunc:
      append_limit_terms(t, c.J(), +1);
      append_limit_terms(t, c.Jprime(), -1);
      break;
    case SystemKind::G:
      append_limit_terms(t, c.J(), +1);
      append_limit_terms(t, c.Jprime(), -1);
      append_limit_terms(t, c.U(), -1);
      append_limit_terms(t, c.zU(), +1);
      break;
    case SystemKind::F2:
      append_limit_terms(t, c.J(), +1);
      append_limit_terms(t, c.Jprime(), -1);
      t.push_back(Term{Arc(CirclePoint(), kHalf), +2});
      t.push_back(Term{Arc(CirclePoint(kHalf), kHalf), -2});
      break;
  }
  return t;
}

std::int64_t reduce(std::int64_t h, FiberGroup g) { return g == FiberGroup::Z2 ? (h & 1) : h; }

}  // namespace

std::string to_string(SystemKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "?";
}

SystemKind parse_system(const std::string& name) {
  for (const auto& [k, n] : kNames) {
    if (name == n) return k;
  }
  throw Error("unknown system '" + name + "'");
}

FiberGroup fiber_group(SystemKind kind) {
  switch (kind) {
    case SystemKind::Tk:
    case SystemKind::Sk:
    case SystemKind::Ttrunc:
      return FiberGroup::Z2;
    default:
      return FiberGroup::Z;
  }
}

bool uses_level(SystemKind kind) {
  switch (kind) {
    case SystemKind::Ttrunc:
    case SystemKind::ThatTrunc:
    case SystemKind::G:
    case SystemKind::F2:
      return false;
    default:
      return true;
  }
}

void append_limit_terms(std::vector<Term>& terms, const LimitArc& arc, std::int64_t weight) {
  const Arc in = arc.certain();
  if (!in.is_empty()) terms.push_back(Term{in, weight});
  for (const auto& b : arc.band()) terms.push_back(Term{b, 0, true});
}

SkewSystem::SkewSystem(const Construction& c, SystemSpec spec)
    : spec_(spec), alpha_(c.alpha()), terms_(build_terms(c, spec)), function_(compile_terms(terms_)) {}

SkewSystem SkewSystem::with_probes(const std::vector<Arc>& probes) const {
  if (probes.size() > 32) throw Error("at most 32 probes");
  SkewSystem s = *this;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    s.terms_.push_back(Term{probes[i], 0, false, 1u << i});
  }
  s.function_ = compile_terms(s.terms_);
  return s;
}

std::int64_t SkewSystem::jump(const CirclePoint& x, bool* uncertain) const {
  std::int64_t j = 0;
  bool u = false;
  for (const auto& t : terms_) {
    if (!arc_contains(t.arc, x)) continue;
    j += t.weight;
    u = u || t.uncertain;
  }
  if (uncertain) *uncertain = u;
  return j;
}

SkewState step(const SkewSystem& sys, const SkewState& s) {
  bool u = false;
  const std::int64_t j = sys.jump(s.x, &u);
  return SkewState{rotate(s.x, sys.alpha()), reduce(s.h + j, sys.group()), s.uncertain || u};
}

SkewState step_back(const SkewSystem& sys, const SkewState& s) {
  const CirclePoint prev(s.x.value() - sys.alpha());
  bool u = false;
  const std::int64_t j = sys.jump(prev, &u);
  return SkewState{prev, reduce(s.h - j, sys.group()), s.uncertain || u};
}

Orbit make_orbit(const SkewSystem& sys, const SkewState& s) {
  return Orbit(sys.alpha(), sys.function(), s.x.value(), sys.group(), s.h, s.uncertain);
}

OrbitSummary orbit(const SkewSystem& sys, const SkewState& start, std::int64_t n,
                   std::int64_t stride,
                   const std::function<void(std::int64_t, const SkewState&)>& callback,
                   std::size_t probes) {
  require_budget(n < 0 ? -n : n, "orbit");
  OrbitSummary sum;
  sum.min_fiber = sum.max_fiber = start.h;
  sum.probe_hits.assign(probes, 0);
  if (callback) callback(0, start);
  Orbit o = make_orbit(sys, start);
  sum.steps = o.run(n, [&](const auto& core) {
    const std::int64_t h = core.fiber();
    sum.min_fiber = std::min(sum.min_fiber, h);
    sum.max_fiber = std::max(sum.max_fiber, h);
    if (probes) {
      const std::uint32_t tags = core.tags();
      for (std::size_t i = 0; i < probes; ++i) {
        if (tags & (1u << i)) ++sum.probe_hits[i];
      }
    }
    if (callback && stride > 0) {
      const std::int64_t t = core.time();
      if ((t < 0 ? -t : t) % stride == 0) {
        callback(t, SkewState{CirclePoint(core.x()), h, core.uncertain()});
      }
    }
  });
  sum.final_state = SkewState{CirclePoint(o.x()), o.fiber(), o.uncertain()};
  sum.uncertain_steps = o.uncertain_steps();
  return sum;
}

BirkhoffSummary birkhoff(const QReal& alpha, const std::vector<Term>& f, const CirclePoint& start,
                         std::int64_t N) {
  BirkhoffSummary out;
  out.N = N;
  if (N <= 0) return out;
  require_budget(N, "birkhoff");
  Orbit o(alpha, compile_terms(f), start.value(), FiberGroup::Z);
  std::int64_t next_sample = 1;
  int mantissa = 0;  // cycles 1, 2, 5
  bool first = true;
  o.run(N, [&](const auto& core) {
    const std::int64_t n = core.time();
    const std::int64_t s = core.fiber();
    if (first || s < out.min) {
      out.min = s;
      out.argmin = n;
    }
    if (first || s > out.max) {
      out.max = s;
      out.argmax = n;
    }
    first = false;
    if (n == next_sample) {
      out.samples.push_back(BirkhoffSample{n, s});
      static constexpr int kSteps[3] = {2, 5, 2};  // 1 -> 2 -> 5 -> 10
      next_sample = mantissa == 1 ? next_sample / 2 * 5 : next_sample * kSteps[mantissa];
      mantissa = (mantissa + 1) % 3;
    }
  });
  out.sum = o.fiber();
  out.uncertain_steps = o.uncertain_steps();
  return out;
}

// ---------------------------------------------------------------- IET

QReal iet_embed(const SkewState& s) {
  return (s.x.value() + QReal::integer(s.h & 1)) * kHalf;
}

IetMap as_iet(const Construction& c, std::size_t k) {
  const SkewSystem sys(c, SystemSpec{SystemKind::Tk, k});
  const QReal& alpha = c.alpha();
  std::vector<QReal> cuts = sys.function().cuts();
  cuts.push_back(kOne - alpha);
  std::sort(cuts.begin(), cuts.end(), [](const QReal& u, const QReal& v) { return u < v; });
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  IetMap m;
  for (int sheet = 0; sheet < 2; ++sheet) {
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      const QReal& a = cuts[i];
      const QReal& b = i + 1 < cuts.size() ? cuts[i + 1] : kOne;
      const std::int64_t j = sys.jump(CirclePoint(a)) & 1;
      const int wrap = a >= kOne - alpha ? 1 : 0;
      const int target = sheet ^ static_cast<int>(j);
      // ((x + alpha - wrap) + target) / 2 - (x + sheet) / 2
      QReal shift = (alpha - QReal::integer(wrap) + QReal::integer(target - sheet)) * kHalf;
      shift = frac(shift);
      const QReal lo = (a + QReal::integer(sheet)) * kHalf;
      const QReal len = (b - a) * kHalf;
      if (!m.pieces.empty()) {
        IetPiece& last = m.pieces.back();
        if (last.translation == shift && last.domain.end() == lo) {
          last.domain = Arc(last.domain.lo(), last.domain.length() + len);
          continue;
        }
      }
      m.pieces.push_back(IetPiece{Arc(CirclePoint(lo), len), shift});
    }
  }
  ArcUnion domains, images;
  QReal total;
  for (const auto& p : m.pieces) {
    domains.insert(p.domain);
    images.insert(Arc(CirclePoint(p.domain.lo().value() + p.translation), p.domain.length()));
    total += p.domain.length();
  }
  m.bijective = total == kOne && domains.measure() == kOne && images.measure() == kOne;
  if (!m.bijective) throw Error("IET pieces do not form a bijection");
  return m;
}

QReal iet_apply(const IetMap& m, const QReal& x) {
  const CirclePoint p(x);
  for (const auto& piece : m.pieces) {
    if (arc_contains(piece.domain, p)) return frac(p.value() + piece.translation);
  }
  throw Error("point outside every IET piece");
}

QReal displacement(const QReal& alpha, const BigInt& n) {
  const QReal na = alpha * QReal::integer(n);
  QReal best;
  for (int s = 0; s < 2; ++s) {
    const QReal v = frac((na + QReal::integer(s)) * kHalf);
    const QReal d = min(v, kOne - v);
    if (s == 0 || d < best) best = d;
  }
  return best;
}

DisplacementBound iet_displacement_bound(const QReal& alpha, std::int64_t n_max) {
  if (n_max < 1) throw Error("n_max must be >= 1");
  require_budget(n_max, "displacement");
  // One of (v + s) / 2, s in {0, 1}, sits at distance ||v|| / 2 from an integer
  // and the other is at least 1/4 away, so d_n = ||n alpha|| / 2. The running
  // value is checked against the definition at every convergent denominator.
  const auto conv = convergents(alpha, 200);
  std::size_t next_conv = 0;
  while (next_conv < conv.size() && conv[next_conv].q < 1) ++next_conv;

  DisplacementBound out;
  out.n_max = n_max;
  QReal x;  // frac(n alpha)
  for (std::int64_t n = 1; n <= n_max; ++n) {
    x += alpha;
    if (x >= kOne) x -= kOne;
    const QReal nd = min(x, kOne - x) * QReal::rational(Rational(BigInt(static_cast<long>(n)), 2));
    if (n == 1 || nd < out.min) {
      out.min = nd;
      out.argmin = n;
    }
    while (next_conv < conv.size() && conv[next_conv].q <= n) {
      if (conv[next_conv].q == n) {
        const QReal def = displacement(alpha, BigInt(static_cast<long>(n))) *
                          QReal::integer(BigInt(static_cast<long>(n)));
        if (!(def == nd)) throw Error("displacement identity failed at n=" + std::to_string(n));
      }
      ++next_conv;
    }
  }
  return out;
}

DisplacementBound iet_displacement_bound(const Construction& c, std::int64_t n_max) {
  return iet_displacement_bound(c.alpha(), n_max);
}

}  // namespace skewlab

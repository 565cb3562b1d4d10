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

#ifndef SKEWLAB_DYNAMICS_HPP
#define SKEWLAB_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/construction.hpp"
#include "skewlab/engine.hpp"

namespace skewlab {

enum class SystemKind { Tk, Sk, Ttrunc, That_k, Shat_k, Fk, ThatTrunc, G, F2 };

struct SystemSpec {
  SystemKind kind = SystemKind::Tk;
  std::size_t k = 1;  // ignored by the truncated limit systems
  // F_k only: sum the T-hat and S-hat jumps over levels 1..k instead of
  // taking level k alone.
  bool fk_all_levels = false;
};

std::string to_string(SystemKind kind);
SystemKind parse_system(const std::string& name);
FiberGroup fiber_group(SystemKind kind);
bool uses_level(SystemKind kind);

struct SkewState {
  CirclePoint x;
  std::int64_t h = 0;  // bit for Z2 systems
  bool uncertain = false;

  friend bool operator==(const SkewState& s, const SkewState& t) {
    return s.x == t.x && s.h == t.h && s.uncertain == t.uncertain;
  }
};

/// A system bound to a construction: the skewing function as a term list and
/// its compiled step function.
class SkewSystem {
 public:
  SkewSystem(const Construction& c, SystemSpec spec);

  const SystemSpec& spec() const { return spec_; }
  FiberGroup group() const { return fiber_group(spec_.kind); }
  const QReal& alpha() const { return alpha_; }
  const std::vector<Term>& terms() const { return terms_; }
  const PiecewiseFunction& function() const { return function_; }

  /// Same skewing function with probe arcs tagged bit i (i < 32).
  SkewSystem with_probes(const std::vector<Arc>& probes) const;

  /// Fiber jump at x by direct arc tests; sets *uncertain on a band hit.
  std::int64_t jump(const CirclePoint& x, bool* uncertain = nullptr) const;

 private:
  SystemSpec spec_;
  QReal alpha_;
  std::vector<Term> terms_;
  PiecewiseFunction function_;
};

// Reference route: one exact step by QReal arithmetic and arc tests.
SkewState step(const SkewSystem& sys, const SkewState& s);
SkewState step_back(const SkewSystem& sys, const SkewState& s);

/// Engine orbit starting at s (time 0).
Orbit make_orbit(const SkewSystem& sys, const SkewState& s);

struct OrbitSummary {
  SkewState final_state;
  std::int64_t steps = 0;
  std::int64_t uncertain_steps = 0;
  std::int64_t min_fiber = 0;
  std::int64_t max_fiber = 0;
  std::vector<std::int64_t> probe_hits;  // per probe bit, over visited states
};

/// Runs n steps (backwards for n < 0). The callback, when set, sees the
/// start and then every stride-th state.
OrbitSummary orbit(const SkewSystem& sys, const SkewState& start, std::int64_t n,
                   std::int64_t stride = 0,
                   const std::function<void(std::int64_t, const SkewState&)>& callback = {},
                   std::size_t probes = 0);

struct BirkhoffSample {
  std::int64_t n = 0;
  std::int64_t sum = 0;
};

struct BirkhoffSummary {
  std::int64_t N = 0;
  std::int64_t sum = 0;
  std::int64_t min = 0;
  std::int64_t argmin = 0;
  std::int64_t max = 0;
  std::int64_t argmax = 0;
  std::int64_t uncertain_steps = 0;
  std::vector<BirkhoffSample> samples;  // at N = 1, 2, 5, 10, 20, ...
};

/// S_N = sum_{n<N} f(R^n x) for f = sum of weighted terms, N = 1..N_max.
/// min/max range over the partial sums S_1..S_N.
BirkhoffSummary birkhoff(const QReal& alpha, const std::vector<Term>& f, const CirclePoint& start,
                         std::int64_t N);

/// Limit-aware skewing terms: weight on the certain part, uncertain flag on
/// the bands.
void append_limit_terms(std::vector<Term>& terms, const LimitArc& arc, std::int64_t weight);

struct IetPiece {
  Arc domain;         // never wraps
  QReal translation;  // image = domain + translation mod 1
};

struct IetMap {
  std::vector<IetPiece> pieces;
  bool bijective = false;
};

/// T_k on [0,1) x Z2 under (x, s) -> (x + s) / 2.
IetMap as_iet(const Construction& c, std::size_t k);
QReal iet_apply(const IetMap& m, const QReal& x);
/// (x + s) / 2
QReal iet_embed(const SkewState& s);

struct DisplacementBound {
  QReal min;  // min over n of n * d_n
  std::int64_t argmin = 0;
  std::int64_t n_max = 0;
};

/// d_n = min_s dist((n alpha + s) / 2, 0), minimized as n * d_n over n <= n_max.
DisplacementBound iet_displacement_bound(const QReal& alpha, std::int64_t n_max);
DisplacementBound iet_displacement_bound(const Construction& c, std::int64_t n_max);
/// d_n straight from the definition.
QReal displacement(const QReal& alpha, const BigInt& n);

}  // namespace skewlab

#endif  // SKEWLAB_DYNAMICS_HPP

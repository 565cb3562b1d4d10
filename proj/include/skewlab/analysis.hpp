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

#ifndef SKEWLAB_ANALYSIS_HPP
#define SKEWLAB_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skewlab/construction.hpp"
#include "skewlab/dynamics.hpp"

namespace skewlab {

enum class Status { Verified, Violated, NoCertificate };

const char* to_string(Status s);

struct Witness {
  std::int64_t n = 0;
  std::string state;  // "x_exact|h" or free text
  std::string value;
};

struct Verdict {
  std::string name;
  Status status = Status::NoCertificate;
  std::optional<Witness> witness;
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> exact;  // lossless values and labels
};

/// Membership of R^{-l} p (or R^{l} p) in a fixed base arc for some l in
/// [1, L], answered for many p at once. The orbit {l alpha} is sorted once by
/// a long double key; candidates near the target window are then decided in
/// exact arithmetic.
class ExceptionalIndex {
 public:
  ExceptionalIndex(const QReal& alpha, Arc base, std::int64_t count, int direction);
  bool contains(const CirclePoint& p) const;
  std::int64_t count() const { return count_; }

 private:
  QReal alpha_;
  Arc base_;
  std::int64_t count_;
  int direction_;
  long double alpha_ld_;
  std::vector<std::uint64_t> keys_;  // quantized frac(l alpha) << 27 | l
};

/// Filters for "x avoids B_k and C_k for all k <= levels".
class ExceptionalFilter {
 public:
  ExceptionalFilter(const Construction& c, std::size_t levels);
  bool excluded(const CirclePoint& p) const;

 private:
  std::vector<ExceptionalIndex> sets_;
};

/// frac(j sqrt(d) / 3 + 1/7), j = 1..count.
std::vector<CirclePoint> sample_points(std::int64_t d, std::size_t count);

// Exact, randomness-free checks.
Verdict check_j_first(const Construction& c, std::int64_t N, bool swap_roles = false);
Verdict check_comparison(const Construction& c, std::int64_t N);
Verdict check_small_shift(const Construction& c, std::size_t k, std::int64_t j_max,
                          std::int64_t perturb = 0);
Verdict separation_check(const QReal& alpha, const std::vector<std::int64_t>& n_list,
                         std::optional<std::int64_t> C = std::nullopt);
Verdict dio_check(const QReal& alpha, std::int64_t n_max,
                  const Rational& threshold = Rational(1, 10));

struct DensityBound {
  QReal bound;
  BigInt shifts;  // enters the finite-N slack 2 * shifts / N
};

/// The level bound for a recognised pair: (T_k, S_{k+1}) or (S_k, T_k).
std::optional<DensityBound> pair_bound(const Construction& c, const SystemSpec& a,
                                       const SystemSpec& b);

Verdict disagreement_density(const Construction& c, const SystemSpec& a, const SystemSpec& b,
                             const SkewState& start, std::int64_t N);

/// Skew check for T-hat_k: fiber range over [-N, N] and nonzero density.
Verdict skew_check(const Construction& c, std::size_t k, const SkewState& start, std::int64_t N,
                   double rel_tol = 0.1);

struct OccupancyProbe {
  Arc arc;
  int sheet = 0;
};

Verdict occupancy(const Construction& c, const SystemSpec& sys, const OccupancyProbe& probe,
                  const std::vector<std::int64_t>& checkpoints, double delta_min = 0.01);

Verdict dense_orbit_certificate(const Construction& c, const QReal& eps,
                                const std::vector<std::int64_t>& r_samples, std::int64_t N_cap);

struct HalfstripOptions {
  std::int64_t N = 1'000'000;
  std::int64_t early = 10'000;  // the earlier checkpoint for the max trend
  std::int64_t min_bound = 2;   // minima must stay >= -min_bound
  double trend_fraction = 0.9;
  std::size_t filter_levels = 0;  // 0 = construction depth
  std::size_t count = 100;        // retained samples to scan
  int jobs = 1;                   // worker threads; results do not depend on it
};

Verdict halfstrip_scan(const Construction& c, const SystemSpec& sys,
                       const std::vector<CirclePoint>& samples, const HalfstripOptions& opt);

struct ShrinkRule {
  enum class Kind { Harmonic, PowerLaw, Custom };
  Kind kind = Kind::Harmonic;
  QReal scale = QReal::integer(1);
  int power = 1;
  std::vector<QReal> custom;  // a_N..a_M for Custom
  std::int64_t N = 1;
  std::int64_t M = 1000;

  QReal radius(std::int64_t i) const;
  /// Throws unless positive and nonincreasing on [N, M].
  void validate() const;
};

struct ShrinkTarget {
  CirclePoint y;
  int sheet = 0;
};

struct ShrinkExact {
  QReal measure;  // lambda_2 of the union, in [0, 2]
  std::vector<std::pair<std::int64_t, QReal>> prefix;  // (M', measure up to M')
  bool uncertain = false;
  // lambda_2 of the pieces whose sheet depends on an undecided band; the
  // true measure differs from `measure` by at most this much.
  QReal uncertain_measure;
};

/// lambda_2 of the union over i in [N, M] of T^{-i} B(target, a_i), T the
/// truncated system at the construction's depth.
ShrinkExact shrink_exact(const Construction& c, const ShrinkTarget& target, const ShrinkRule& rule,
                         const std::vector<std::int64_t>& checkpoints = {});

struct ShrinkEstimate {
  double measure = 0;
  double stderr_ = 0;
  std::int64_t samples = 0;
  std::int64_t hits = 0;
  std::int64_t uncertain = 0;
};

/// Sample s uses the s-th output of mt19937_64(seed), whatever `jobs` is.
ShrinkEstimate shrink_estimate(const Construction& c, const ShrinkTarget& target,
                               const ShrinkRule& rule, std::int64_t samples, std::uint64_t seed,
                               int jobs = 1);

/// Runs fn(begin, end) over contiguous shards of [0, n) on up to `jobs` threads.
void parallel_shards(std::int64_t n, int jobs,
                     const std::function<void(std::int64_t, std::int64_t)>& fn);

/// Random target (y, sheet) on the 2^-32 grid, from the seed.
ShrinkTarget random_target(std::uint64_t seed, int index);

}  // namespace skewlab

#endif  // SKEWLAB_ANALYSIS_HPP

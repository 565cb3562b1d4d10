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

#ifndef SKEWLAB_CONSTRUCTION_HPP
#define SKEWLAB_CONSTRUCTION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/qfield.hpp"

namespace skewlab {

enum class Membership3 { In, Out, Uncertain };

const char* to_string(Membership3 m);

/// Thrown when a scan would exceed the iteration cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Iteration cap for exact scans: SKEWLAB_BUDGET or 10^8.
std::int64_t iteration_budget();
/// Throws BudgetExceeded when a single run of n iterations exceeds the cap.
void require_budget(std::int64_t n, const char* what);

/// Convergent indices: c_k = q_{f(k)}, b_k = q_{g(k)}; h1, h2 index the two
/// extra sums of the four-interval system G.
class IndexMaps {
 public:
  static IndexMaps preset(const std::string& name);
  static IndexMaps custom(std::vector<std::size_t> f, std::vector<std::size_t> g,
                          std::vector<std::size_t> h1 = {}, std::vector<std::size_t> h2 = {});

  const std::string& name() const { return name_; }
  bool has_h() const;
  /// Largest k the maps define (unbounded presets report SIZE_MAX).
  std::size_t defined_levels() const;
  std::size_t defined_h_levels() const;

  // 1-based; throw Error past the defined range.
  std::size_t f(std::size_t k) const;
  std::size_t g(std::size_t k) const;
  std::size_t h1(std::size_t k) const;
  std::size_t h2(std::size_t k) const;

  bool is_custom() const { return kind_ == Kind::Custom; }
  /// Custom lists in the order f, g, h1, h2.
  const std::vector<std::size_t>& list(int which) const { return lists_[which]; }

 private:
  enum class Kind { Paper, Geometric, Linear, Custom };
  std::size_t eval(int which, std::size_t k) const;

  Kind kind_ = Kind::Linear;
  std::string name_ = "linear";
  std::vector<std::size_t> lists_[4];
};

/// Structural problems with the maps at levels 1..levels (empty when fine).
std::vector<std::string> interleaving_issues(const IndexMaps& maps, std::size_t levels);

/// Arc [lo, lo + len) whose endpoints are limits known only to lie in
/// lo in [lo_min, lo_min + lo_width], len in [len_min, len_max].
struct LimitArc {
  QReal lo_min;
  QReal lo_width;
  QReal len_min;
  QReal len_max;

  /// Points inside the arc for every admissible (lo, len).
  Arc certain() const;
  /// Points inside the arc for some admissible (lo, len).
  Arc possible() const;
  /// possible() minus certain(), as at most two arcs.
  std::vector<Arc> band() const;
  Membership3 membership(const CirclePoint& p) const;
};

struct LevelBound {
  std::size_t k = 0;
  QReal c_bound;  // (sum_{i<=k} b_i) * gamma_{k+1}
  QReal b_bound;  // (sum_{i<=k} c_i) * beta_{k+1}
  QReal sk_bound;  // (sum_{i<=k} c_i) * beta_k, width of [y_{k-1}, y_k) times shifts
};

class Construction {
 public:
  static Construction build(const QReal& alpha, const IndexMaps& maps, std::size_t depth);

  const QReal& alpha() const { return alpha_; }
  const IndexMaps& maps() const { return maps_; }
  std::size_t depth() const { return depth_; }
  std::int64_t d() const { return alpha_.d(); }

  // Levels 1..depth+1 (the extra level is the lookahead used for bounds).
  const BigInt& c(std::size_t k) const;
  const BigInt& b(std::size_t k) const;
  const QReal& gamma(std::size_t k) const;
  const QReal& beta(std::size_t k) const;
  /// sum_{i<=k} gamma_i, k in 0..depth+1.
  const QReal& theta(std::size_t k) const;
  /// frac(alpha + sum_{i<=k} beta_i), k in 0..depth+1.
  const QReal& y(std::size_t k) const;
  const BigInt& c_sum(std::size_t k) const;
  const BigInt& b_sum(std::size_t k) const;

  const QReal& theta_K() const { return theta(depth_); }
  const QReal& tail_c() const { return tail_c_; }
  const QReal& tail_b() const { return tail_b_; }

  // Exact approximant arcs.
  Arc J_k(std::size_t k) const;                  // [0, theta_k)
  Arc shifted_J_k(const QReal& by, std::size_t k) const;
  Arc theta_band(std::size_t k) const;           // [theta_k, theta_{k+1})
  Arc y_band(std::size_t k) const;               // [y_{k-1}, y_k)

  // Limit arcs with their uncertainty bands.
  const LimitArc& J() const { return J_; }
  const LimitArc& Jprime() const { return Jprime_; }
  bool has_g_system() const { return has_g_; }
  const LimitArc& U() const;
  const LimitArc& zU() const;

  const std::vector<LevelBound>& level_bounds() const { return bounds_; }
  /// Non-fatal findings from build (level sum >= 1, overlapping bands, ...).
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  Construction() = default;

  QReal alpha_;
  IndexMaps maps_;
  std::size_t depth_ = 0;
  std::vector<BigInt> c_, b_, c_sum_, b_sum_;
  std::vector<QReal> gamma_, beta_, theta_, y_;
  QReal tail_c_, tail_b_;
  LimitArc J_, Jprime_, U_, zU_;
  bool has_g_ = false;
  std::vector<LevelBound> bounds_;
  std::vector<std::string> warnings_;
};

Membership3 membership_J(const Construction& c, const CirclePoint& p);
Membership3 membership_Jprime(const Construction& c, const CirclePoint& p);

// Exceptional sets, by exact scan. Throw BudgetExceeded past the cap.
bool in_B(const Construction& c, std::size_t k, const CirclePoint& p);
bool in_C(const Construction& c, std::size_t k, const CirclePoint& p);
bool in_Bprime(const Construction& c, std::size_t k, const CirclePoint& p);
bool in_Cprime(const Construction& c, std::size_t k, const CirclePoint& p);

/// First l in [1, count] with R^{direction*l} p in arc, or 0.
std::int64_t first_visit(const QReal& alpha, const Arc& arc, const CirclePoint& p,
                         std::int64_t count, int direction);

struct GrowthRow {
  std::size_t k = 0;
  QReal c_bound;
  QReal b_bound;
  QReal running_sum;
  bool skew_prerequisite = false;  // c_{k+1} > sum_{i<=k} b_i
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  std::vector<std::string> issues;
  bool passed = false;
};

GrowthReport validate_growth(const Construction& c);

/// Default field element sqrt(5) - 2.
QReal default_alpha();

struct ConstructionConfig {
  QReal alpha = default_alpha();
  IndexMaps maps = IndexMaps::preset("linear");
  std::size_t depth = 2;
};

/// `sqrt:<d>:<a>:<b>` where a and b are integers or num/den fractions.
QReal parse_alpha_spec(const std::string& spec);

/// Construction JSON: {"alpha": {...} | "<spec>", "preset": ..., "depth": K}.
ConstructionConfig parse_config(const std::string& json_text);
std::string config_to_json(const ConstructionConfig& cfg);

}  // namespace skewlab

#endif  // SKEWLAB_CONSTRUCTION_HPP

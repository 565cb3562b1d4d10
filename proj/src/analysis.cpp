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

#include "skewlab/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace skewlab {

namespace {

const QReal kOne = QReal::integer(1);
const QReal kHalf = QReal::rational(Rational(1, 2));

constexpr int kIndexBits = 27;
constexpr int kKeyBits = 37;
constexpr std::uint64_t kIndexMask = (std::uint64_t{1} << kIndexBits) - 1;
constexpr long double kKeyScale = static_cast<long double>(std::uint64_t{1} << kKeyBits);
constexpr long double kKeyMargin = 1e-9L;

QReal qint(std::int64_t n) { return QReal::integer(BigInt(static_cast<long>(n))); }

std::int64_t to_i64(const BigInt& n, const char* what) {
  if (!n.fits_slong_p()) throw BudgetExceeded(std::string(what) + " does not fit 64 bits");
  return n.get_si();
}

long double to_ld(const QReal& x) { return std::strtold(to_decimal(x, 30).c_str(), nullptr); }

std::string state_string(const QReal& x, std::int64_t h) {
  return to_exact_string(x) + "|" + std::to_string(h);
}

// Signed representative of v - z in [-1/2, 1/2).
QReal signed_offset(const QReal& v, const QReal& z) {
  QReal d = frac(v - z);
  if (d >= kHalf) d -= kOne;
  return d;
}

long double circ_dist_ld(long double u, long double v) {
  long double d = std::fabs(u - v);
  d -= std::floor(d);
  return std::min(d, 1.0L - d);
}

Verdict make(const char* name) {
  Verdict v;
  v.name = name;
  return v;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Verified:
      return "Verified";
    case Status::Violated:
      return "Violated";
    case Status::NoCertificate:
      return "NoCertificate";
  }
  return "?";
}

// ---------------------------------------------------------------- exceptional sets

ExceptionalIndex::ExceptionalIndex(const QReal& alpha, Arc base, std::int64_t count, int direction)
    : alpha_(alpha), base_(std::move(base)), count_(count), direction_(direction >= 0 ? 1 : -1) {
  if (count_ > iteration_budget()) {
    throw BudgetExceeded("index of " + std::to_string(count_) + " points exceeds budget " +
                         std::to_string(iteration_budget()));
  }
  if (count_ > static_cast<std::int64_t>(kIndexMask)) throw BudgetExceeded("index too large");
  alpha_ld_ = to_ld(alpha_);
  keys_.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count_, 0)));
  for (std::int64_t l = 1; l <= count_; ++l) {
    long double v = static_cast<long double>(l) * alpha_ld_;
    v -= std::floor(v);
    auto q = static_cast<std::uint64_t>(v * kKeyScale);
    q = std::min(q, (std::uint64_t{1} << kKeyBits) - 1);
    keys_.push_back(q << kIndexBits | static_cast<std::uint64_t>(l));
  }
  std::sort(keys_.begin(), keys_.end());
}

bool ExceptionalIndex::contains(const CirclePoint& p) const {
  if (base_.is_empty() || keys_.empty()) return false;
  // Window of frac(l alpha) values that carry p into the base arc.
  const QReal lo_exact = direction_ < 0 ? frac(p.value() - base_.lo().value() - base_.length())
                                        : frac(base_.lo().value() - p.value());
  const long double lo = to_ld(lo_exact);
  const long double w = to_ld(base_.length());

  std::vector<std::pair<long double, long double>> ranges;
  const long double s = lo - kKeyMargin;
  const long double e = lo + w + kKeyMargin;
  if (e - s >= 1.0L) {
    ranges.emplace_back(0.0L, 1.0L);
  } else if (s < 0) {
    ranges.emplace_back(s + 1.0L, 1.0L);
    ranges.emplace_back(0.0L, e);
  } else if (e > 1.0L) {
    ranges.emplace_back(s, 1.0L);
    ranges.emplace_back(0.0L, e - 1.0L);
  } else {
    ranges.emplace_back(s, e);
  }

  for (const auto& [a, b] : ranges) {
    const auto qa = static_cast<std::uint64_t>(std::max(0.0L, a) * kKeyScale);
    const auto qb = std::min(static_cast<std::uint64_t>(b * kKeyScale),
                             (std::uint64_t{1} << kKeyBits) - 1);
    auto it = std::lower_bound(keys_.begin(), keys_.end(), qa << kIndexBits);
    const auto end = std::upper_bound(keys_.begin(), keys_.end(), qb << kIndexBits | kIndexMask);
    for (; it < end; ++it) {
      const auto l = static_cast<std::int64_t>(*it & kIndexMask);
      const QReal shift = alpha_ * qint(l);
      const CirclePoint moved(direction_ < 0 ? p.value() - shift : p.value() + shift);
      if (arc_contains(base_, moved)) return true;
    }
  }
  return false;
}

ExceptionalFilter::ExceptionalFilter(const Construction& c, std::size_t levels) {
  if (levels > c.depth()) throw Error("filter levels exceed construction depth");
  for (std::size_t k = 1; k <= levels; ++k) {
    sets_.emplace_back(c.alpha(), c.y_band(k), to_i64(c.c_sum(k), "c_sum"), -1);
    sets_.emplace_back(c.alpha(), c.theta_band(k), to_i64(c.b_sum(k), "b_sum"), -1);
  }
}

bool ExceptionalFilter::excluded(const CirclePoint& p) const {
  return std::any_of(sets_.begin(), sets_.end(),
                     [&](const ExceptionalIndex& s) { return s.contains(p); });
}

std::vector<CirclePoint> sample_points(std::int64_t d, std::size_t count) {
  std::vector<CirclePoint> out;
  out.reserve(count);
  for (std::size_t j = 1; j <= count; ++j) {
    out.emplace_back(QReal(Rational(1, 7), Rational(BigInt(static_cast<unsigned long>(j)), 3), d));
  }
  return out;
}

// ---------------------------------------------------------------- exact checks

Verdict check_j_first(const Construction& c, std::int64_t N, bool swap_roles) {
  Verdict v = make("j-first");
  require_budget(N, "j-first");
  const std::int64_t s = swap_roles ? -1 : 1;
  std::vector<Term> terms;
  append_limit_terms(terms, c.J(), s);
  append_limit_terms(terms, c.Jprime(), -s);
  Orbit o(c.alpha(), compile_terms(terms), QReal(), FiberGroup::Z);

  std::int64_t min_sum = 0, argmin = 0, max_sum = 0, first_negative = 0, first_uncertain = 0;
  bool first = true;
  o.run(N, [&](const auto& core) {
    const std::int64_t n = core.time();
    const std::int64_t sum = core.fiber();
    if (core.uncertain() && first_uncertain == 0) first_uncertain = n;
    if (first || sum < min_sum) {
      min_sum = sum;
      argmin = n;
    }
    max_sum = first ? sum : std::max(max_sum, sum);
    first = false;
    if (sum < 0 && first_negative == 0) first_negative = n;
  });

  v.metrics["N"] = static_cast<double>(N);
  v.metrics["min_partial_sum"] = static_cast<double>(min_sum);
  v.metrics["argmin"] = static_cast<double>(argmin);
  v.metrics["max_partial_sum"] = static_cast<double>(max_sum);
  v.metrics["final_sum"] = static_cast<double>(o.fiber());
  v.metrics["uncertain_steps"] = static_cast<double>(o.uncertain_steps());
  v.exact["exactness_horizon"] = c.c_sum(c.depth()).get_str();
  v.exact["roles"] = swap_roles ? "swapped" : "J minus J'";

  if (first_negative != 0 && (first_uncertain == 0 || first_negative < first_uncertain)) {
    v.status = Status::Violated;
    v.witness = Witness{first_negative, "N'", std::to_string(min_sum)};
  } else if (o.uncertain_steps() > 0) {
    v.status = Status::NoCertificate;
    v.witness = Witness{first_uncertain, "first uncertain step", ""};
  } else {
    v.status = Status::Verified;
  }
  return v;
}

Verdict check_comparison(const Construction& c, std::int64_t N) {
  Verdict v = make("comparison");
  require_budget(N, "comparison");
  if (c.depth() < 2) throw Error("comparison needs depth >= 2");
  const std::size_t k = c.depth() - 1;
  const BigInt horizon = c.c_sum(k);
  std::int64_t steps = N;
  if (horizon - 1 < steps) steps = to_i64(horizon - 1, "horizon");
  v.exact["clamped"] = steps < N ? "true" : "false";
  v.exact["horizon"] = horizon.get_str();
  v.metrics["requested_N"] = static_cast<double>(N);
  v.metrics["steps_compared"] = static_cast<double>(steps);

  const SkewSystem approx(c, SystemSpec{SystemKind::Tk, k});
  const SkewSystem limit(c, SystemSpec{SystemKind::Ttrunc});
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(std::max<std::int64_t>(steps, 0)));
  Orbit a = make_orbit(approx, SkewState{});
  a.run(steps, [&](const auto& core) { bits.push_back(static_cast<std::uint8_t>(core.fiber())); });

  Orbit b = make_orbit(limit, SkewState{});
  std::int64_t mismatch = 0;
  std::int64_t first_uncertain = 0;
  b.run(steps, [&](const auto& core) {
    const std::int64_t n = core.time();
    if (core.uncertain() && first_uncertain == 0) first_uncertain = n;
    if (bits[static_cast<std::size_t>(n - 1)] != core.fiber()) {
      mismatch = n;
      return false;
    }
    return true;
  });
  v.metrics["uncertain_steps"] = static_cast<double>(b.uncertain_steps());
  if (mismatch != 0 && (first_uncertain == 0 || mismatch < first_uncertain)) {
    v.status = Status::Violated;
    v.witness = Witness{mismatch, state_string(b.x(), b.fiber()), "fibers differ"};
  } else if (b.uncertain_steps() > 0) {
    v.status = Status::NoCertificate;
    v.witness = Witness{first_uncertain, "first uncertain step", ""};
  } else {
    v.status = Status::Verified;
  }
  return v;
}

Verdict check_small_shift(const Construction& c, std::size_t k, std::int64_t j_max,
                          std::int64_t perturb) {
  Verdict v = make("small-shift");
  require_budget(j_max, "small-shift");
  if (k < 1 || k + 1 > c.depth()) throw Error("small shift needs 1 <= k and k + 1 <= depth");
  const BigInt shift = c.b(k + 1) + BigInt(static_cast<long>(perturb));
  const QReal& beta = c.beta(k + 1);
  v.exact["shift"] = shift.get_str();
  v.exact["beta"] = to_exact_string(beta);
  v.exact["c_sum_next"] = c.c_sum(k + 1).get_str();
  v.metrics["j_max"] = static_cast<double>(j_max);

  const SkewSystem sys(c, SystemSpec{SystemKind::Ttrunc});
  Orbit a = make_orbit(sys, SkewState{});
  Orbit b = make_orbit(sys, SkewState{});
  b.run(to_i64(shift, "shift"), [](const auto&) {});

  std::int64_t failure = 0;
  for (std::int64_t j = 1; j <= j_max; ++j) {
    a.forward();
    b.forward();
    const bool x_ok = CirclePoint(a.x() + beta) == CirclePoint(b.x());
    const bool h_ok = (a.fiber() ^ 1) == b.fiber();
    if (!x_ok || !h_ok) {
      failure = j;
      break;
    }
  }
  const bool uncertain = a.uncertain() || b.uncertain();
  v.metrics["uncertain_steps"] = static_cast<double>(a.uncertain_steps() + b.uncertain_steps());
  v.metrics["last_good_j"] = static_cast<double>(failure == 0 ? j_max : failure - 1);
  if (failure != 0 && !uncertain) {
    v.status = Status::Violated;
    v.witness = Witness{failure, state_string(b.x(), b.fiber()), "identity fails"};
  } else if (uncertain) {
    v.status = Status::NoCertificate;
  } else {
    v.status = Status::Verified;
  }
  return v;
}

Verdict separation_check(const QReal& alpha, const std::vector<std::int64_t>& n_list,
                         std::optional<std::int64_t> C) {
  Verdict v = make("separation");
  if (!n_list.empty()) require_budget(*std::max_element(n_list.begin(), n_list.end()), "separation");
  std::int64_t bound_c = 0;
  if (C) {
    bound_c = *C;
  } else {
    const ContinuedFraction cf = continued_fraction(alpha, 60);
    BigInt best = 1;
    for (std::size_t i = 1; i < cf.terms.size(); ++i) best = std::max(best, cf.terms[i]);
    bound_c = to_i64(best, "partial quotient");
  }
  v.metrics["C"] = static_cast<double>(bound_c);
  std::vector<std::int64_t> ns = n_list;
  std::sort(ns.begin(), ns.end());
  v.status = Status::Verified;
  QReal x;
  QReal sep;
  std::int64_t m = 0;
  for (std::int64_t n : ns) {
    if (n < 1) throw Error("separation needs n >= 1");
    while (m < n) {
      ++m;
      x += alpha;
      x = frac(x);
      const QReal d = min(x, kOne - x);
      if (m == 1 || d < sep) sep = d;
    }
    const QReal bound = QReal::rational(Rational(1, BigInt(static_cast<long>(2 * bound_c)) *
                                                        BigInt(static_cast<long>(n))));
    v.metrics["sep_" + std::to_string(n)] = to_double(sep);
    v.metrics["n_sep_" + std::to_string(n)] = to_double(sep * qint(n));
    if (sep < bound && v.status == Status::Verified) {
      v.status = Status::Violated;
      v.witness = Witness{n, "min distance", to_decimal(sep)};
    }
  }
  return v;
}

Verdict dio_check(const QReal& alpha, std::int64_t n_max, const Rational& threshold) {
  Verdict v = make("dio");
  require_budget(n_max, "dio");
  const DisplacementBound db = iet_displacement_bound(alpha, n_max);

  QReal conv_min;
  std::int64_t conv_arg = 0;
  for (const auto& cv : convergents(alpha, 200)) {
    if (cv.q < 1 || cv.q > n_max) continue;
    const QReal val = displacement(alpha, cv.q) * QReal::integer(cv.q);
    if (conv_arg == 0 || val < conv_min) {
      conv_min = val;
      conv_arg = cv.q.get_si();
    }
  }
  const bool agree = conv_arg != 0 && conv_min == db.min;
  v.exact["c_hat"] = to_exact_string(db.min);
  v.exact["convergent_value"] = conv_arg ? to_exact_string(conv_min) : "";
  v.exact["agree"] = agree ? "true" : "false";
  v.metrics["c_hat"] = to_double(db.min);
  v.metrics["argmin"] = static_cast<double>(db.argmin);
  v.metrics["convergent_argmin"] = static_cast<double>(conv_arg);
  v.metrics["n_max"] = static_cast<double>(n_max);
  v.metrics["threshold"] = threshold.get_d();

  if (!agree) {
    v.status = Status::Violated;
    v.witness = Witness{db.argmin, "convergent formula disagrees", to_decimal(db.min)};
  } else if (db.min < QReal::rational(threshold)) {
    v.status = Status::Violated;
    v.witness = Witness{db.argmin, "n d_n", to_decimal(db.min)};
  } else {
    v.status = Status::Verified;
  }
  return v;
}

// ---------------------------------------------------------------- densities

std::optional<DensityBound> pair_bound(const Construction& c, const SystemSpec& a,
                                       const SystemSpec& b) {
  auto is = [](const SystemSpec& s, SystemKind kind, std::size_t k) {
    return s.kind == kind && s.k == k;
  };
  if (a.kind == b.kind && a.k == b.k) return DensityBound{QReal(), BigInt(0)};
  for (int swap = 0; swap < 2; ++swap) {
    const SystemSpec& u = swap ? b : a;
    const SystemSpec& w = swap ? a : b;
    const std::size_t k = u.k;
    if (u.kind == SystemKind::Tk && is(w, SystemKind::Sk, k + 1) && k + 1 <= c.depth()) {
      return DensityBound{QReal::integer(c.b_sum(k)) * c.gamma(k + 1), c.b_sum(k)};
    }
    if (u.kind == SystemKind::Sk && is(w, SystemKind::Tk, k) && k >= 1 && k <= c.depth()) {
      return DensityBound{QReal::integer(c.c_sum(k)) * c.beta(k), c.c_sum(k)};
    }
  }
  return std::nullopt;
}

Verdict disagreement_density(const Construction& c, const SystemSpec& a, const SystemSpec& b,
                             const SkewState& start, std::int64_t N) {
  Verdict v = make("density");
  require_budget(N, "density");
  if (N < 1) throw Error("density needs N >= 1");
  const SkewSystem sa(c, a);
  const SkewSystem sb(c, b);
  v.exact["pair"] = to_string(a.kind) + std::to_string(a.k) + "," + to_string(b.kind) +
                    std::to_string(b.k);

  std::vector<std::int64_t> fa;
  fa.reserve(static_cast<std::size_t>(N));
  Orbit oa = make_orbit(sa, start);
  oa.run(N, [&](const auto& core) { fa.push_back(core.fiber()); });
  Orbit ob = make_orbit(sb, start);
  std::int64_t count = 0;
  std::int64_t first = 0;
  ob.run(N, [&](const auto& core) {
    if (fa[static_cast<std::size_t>(core.time() - 1)] != core.fiber()) {
      ++count;
      if (first == 0) first = core.time();
    }
  });
  const std::int64_t uncertain = oa.uncertain_steps() + ob.uncertain_steps();
  v.metrics["N"] = static_cast<double>(N);
  v.metrics["disagreements"] = static_cast<double>(count);
  v.metrics["density"] = static_cast<double>(count) / static_cast<double>(N);
  v.metrics["first_disagreement"] = static_cast<double>(first);
  v.metrics["uncertain_steps"] = static_cast<double>(uncertain);

  const auto bound = pair_bound(c, a, b);
  if (!bound) {
    v.status = Status::NoCertificate;
    v.exact["note"] = "no level bound for this pair";
    return v;
  }
  // density <= bound (1 + 2 shifts / N)  <=>  count <= bound (N + 2 shifts)
  const QReal allowed = bound->bound * QReal::integer(BigInt(static_cast<long>(N)) + 2 * bound->shifts);
  v.exact["bound"] = to_exact_string(bound->bound);
  v.exact["shifts"] = bound->shifts.get_str();
  v.metrics["bound"] = to_double(bound->bound);
  v.metrics["bound_with_slack"] = to_double(allowed) / static_cast<double>(N);
  if (uncertain > 0) {
    v.status = Status::NoCertificate;
  } else if (qint(count) <= allowed) {
    v.status = Status::Verified;
  } else {
    v.status = Status::Violated;
    v.witness = Witness{N, "density", std::to_string(count) + "/" + std::to_string(N)};
  }
  return v;
}

Verdict skew_check(const Construction& c, std::size_t k, const SkewState& start, std::int64_t N,
                   double rel_tol) {
  Verdict v = make("skew");
  require_budget(2 * N, "skew");
  if (k < 1 || k > c.depth()) throw Error("skew level outside [1, depth]");
  const SkewSystem sys(c, SystemSpec{SystemKind::That_k, k});
  std::int64_t lo = start.h, hi = start.h, nonzero = start.h != 0 ? 1 : 0;
  auto observe = [&](const auto& core) {
    const std::int64_t h = core.fiber();
    lo = std::min(lo, h);
    hi = std::max(hi, h);
    if (h != 0) ++nonzero;
  };
  Orbit o = make_orbit(sys, start);
  o.run(N, observe);
  o.reset(start.x.value(), start.h, start.uncertain);
  o.run(-N, observe);

  const bool exceptional = in_B(c, k, start.x);
  QReal expected = QReal::integer(c.b_sum(k)) * c.gamma(k + 1);
  if (exceptional) expected = kOne - expected;
  const double total = static_cast<double>(2 * N + 1);
  const double density = static_cast<double>(nonzero) / total;
  const double exp_d = to_double(expected);
  const bool range_ok = exceptional ? (lo >= -1 && hi <= 0) : (lo >= 0 && hi <= 1);
  const bool density_ok = std::fabs(density - exp_d) <= rel_tol * exp_d;

  v.metrics["N"] = static_cast<double>(N);
  v.metrics["fiber_min"] = static_cast<double>(lo);
  v.metrics["fiber_max"] = static_cast<double>(hi);
  v.metrics["nonzero_density"] = density;
  v.metrics["expected_density"] = exp_d;
  v.metrics["rel_tol"] = rel_tol;
  v.exact["expected_density"] = to_exact_string(expected);
  v.exact["start_in_B"] = exceptional ? "true" : "false";
  if (range_ok && density_ok) {
    v.status = Status::Verified;
  } else {
    v.status = Status::Violated;
    v.witness = Witness{N, range_ok ? "density" : "range",
                        range_ok ? std::to_string(density)
                                 : "[" + std::to_string(lo) + "," + std::to_string(hi) + "]"};
  }
  return v;
}

// ---------------------------------------------------------------- occupancy

Verdict occupancy(const Construction& c, const SystemSpec& sys_spec, const OccupancyProbe& probe,
                  const std::vector<std::int64_t>& checkpoints, double delta_min) {
  Verdict v = make("occupancy");
  for (std::int64_t n : checkpoints) require_budget(n, "occupancy");
  if (checkpoints.empty()) throw Error("occupancy needs checkpoints");
  std::vector<std::int64_t> cps = checkpoints;
  std::sort(cps.begin(), cps.end());
  const SkewSystem sys = SkewSystem(c, sys_spec).with_probes({probe.arc});
  const bool z2 = sys.group() == FiberGroup::Z2;
  const double lambda = to_double(probe.arc.length());

  // hits[start][sheet][checkpoint]; sheet 0 is the probe sheet, 1 its partner.
  std::int64_t hits[2][2] = {{0, 0}, {0, 0}};
  std::vector<std::array<std::int64_t, 4>> rows(cps.size());
  std::int64_t uncertain = 0;
  for (int s = 0; s < 2; ++s) {
    Orbit o = make_orbit(sys, SkewState{CirclePoint(), s});
    std::size_t next = 0;
    o.run(cps.back(), [&](const auto& core) {
      if (core.tags() & 1u) {
        const std::int64_t h = core.fiber();
        if (h == probe.sheet) ++hits[s][0];
        else if (z2) ++hits[s][1];
      }
      while (next < cps.size() && core.time() == cps[next]) {
        rows[next][2 * s] = hits[s][0];
        rows[next][2 * s + 1] = hits[s][1];
        ++next;
      }
    });
    uncertain += o.uncertain_steps();
  }

  bool ok = true;
  std::int64_t failed_at = 0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const double n = static_cast<double>(cps[i]);
    const double nu00 = rows[i][0] / n, nu00b = rows[i][1] / n;
    const double nu01 = rows[i][2] / n, nu01b = rows[i][3] / n;
    const double gap = std::fabs(nu00 - nu01);
    const double tol = 4.0 / std::sqrt(n);
    const std::string tag = "_" + std::to_string(cps[i]);
    v.metrics["nu00" + tag] = nu00;
    v.metrics["nu01" + tag] = nu01;
    v.metrics["gap" + tag] = gap;
    v.metrics["marginal00" + tag] = nu00 + nu00b;
    v.metrics["marginal01" + tag] = nu01 + nu01b;
    const bool row_ok = gap >= delta_min && (!z2 || (std::fabs(nu00 + nu00b - lambda) <= tol &&
                                                     std::fabs(nu01 + nu01b - lambda) <= tol));
    if (!row_ok && ok) {
      ok = false;
      failed_at = cps[i];
    }
  }
  v.metrics["lambda"] = lambda;
  v.metrics["delta_min"] = delta_min;
  v.metrics["uncertain_steps"] = static_cast<double>(uncertain);
  if (uncertain > 0) {
    v.status = Status::NoCertificate;
  } else if (ok) {
    v.status = Status::Verified;
  } else {
    v.status = Status::Violated;
    v.witness = Witness{failed_at, "checkpoint", ""};
  }
  return v;
}

Verdict dense_orbit_certificate(const Construction& c, const QReal& eps,
                                const std::vector<std::int64_t>& r_samples, std::int64_t N_cap) {
  Verdict v = make("dense-orbit");
  require_budget(N_cap, "dense-orbit");
  const SkewSystem sys(c, SystemSpec{SystemKind::Ttrunc});
  const QReal two_eps = eps * QReal::integer(2);
  std::int64_t worst = 0;
  bool uncertain = false;
  bool capped = false;
  for (std::int64_t r : r_samples) {
    Orbit o = make_orbit(sys, SkewState{});
    o.run(r, [](const auto&) {});
    std::vector<CirclePoint> sheet[2];
    sheet[o.fiber()].emplace_back(o.x());
    std::int64_t n = 1;
    std::int64_t target = 2;
    std::int64_t found = 0;
    while (found == 0) {
      if (target > N_cap) {
        capped = true;
        break;
      }
      o.run(target - n, [&](const auto& core) { sheet[core.fiber()].emplace_back(core.x()); });
      n = target;
      if (!sheet[0].empty() && !sheet[1].empty() && max_gap(sheet[0]) <= two_eps &&
          max_gap(sheet[1]) <= two_eps) {
        found = n;
      }
      target *= 2;
    }
    uncertain = uncertain || o.uncertain();
    v.metrics["N_r" + std::to_string(r)] = static_cast<double>(found);
    worst = std::max(worst, found);
  }
  v.metrics["N"] = static_cast<double>(worst);
  v.exact["eps"] = to_exact_string(eps);
  if (uncertain) {
    v.status = Status::NoCertificate;
  } else if (capped) {
    v.status = Status::Violated;
    v.witness = Witness{N_cap, "not eps-dense by N_cap", ""};
  } else {
    v.status = Status::Verified;
  }
  return v;
}

// ---------------------------------------------------------------- half strips

Verdict halfstrip_scan(const Construction& c, const SystemSpec& spec,
                       const std::vector<CirclePoint>& samples, const HalfstripOptions& opt) {
  Verdict v = make("halfstrip");
  require_budget(2 * opt.N, "halfstrip");
  const SkewSystem sys(c, spec);
  const std::size_t levels = opt.filter_levels == 0 ? c.depth() : opt.filter_levels;
  const ExceptionalFilter filter(c, levels);

  std::vector<std::size_t> picked;
  std::size_t skipped = 0;
  for (std::size_t idx = 0; idx < samples.size() && picked.size() < opt.count; ++idx) {
    if (filter.excluded(samples[idx])) {
      ++skipped;
    } else {
      picked.push_back(idx);
    }
  }

  struct Range {
    std::int64_t lo = 0, hi = 0, lo_early = 0, hi_early = 0, uncertain = 0;
  };
  std::vector<Range> ranges(picked.size());
  parallel_shards(static_cast<std::int64_t>(picked.size()), opt.jobs,
                  [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const CirclePoint& p = samples[picked[static_cast<std::size_t>(i)]];
      Range& r = ranges[static_cast<std::size_t>(i)];
      auto observe = [&](const auto& core) {
        const std::int64_t h = core.fiber();
        r.lo = std::min(r.lo, h);
        r.hi = std::max(r.hi, h);
        const std::int64_t t = core.time();
        if ((t < 0 ? -t : t) <= opt.early) {
          r.lo_early = std::min(r.lo_early, h);
          r.hi_early = std::max(r.hi_early, h);
        }
      };
      Orbit o = make_orbit(sys, SkewState{p, 0});
      o.run(opt.N, observe);
      r.uncertain += o.uncertain_steps();
      o.reset(p.value(), 0);
      o.run(-opt.N, observe);
      r.uncertain += o.uncertain_steps();
    }
  });

  std::size_t above = 0, rising = 0, widening = 0, both_signs = 0;
  std::int64_t worst_min = 0, uncertain = 0, min_witness = 0;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const Range& r = ranges[i];
    uncertain += r.uncertain;
    if (r.lo >= -opt.min_bound) {
      ++above;
    } else if (min_witness == 0) {
      min_witness = static_cast<std::int64_t>(picked[i]) + 1;
    }
    if (r.hi > r.hi_early) ++rising;
    if (r.hi - r.lo > r.hi_early - r.lo_early) ++widening;
    if (r.lo < 0 && r.hi > 0) ++both_signs;
    worst_min = i == 0 ? r.lo : std::min(worst_min, r.lo);
  }
  const std::size_t used = picked.size();

  const double n = static_cast<double>(std::max<std::size_t>(used, 1));
  v.exact["system"] = to_string(spec.kind);
  v.exact["label"] = "trend";
  v.metrics["samples"] = static_cast<double>(used);
  v.metrics["filtered_out"] = static_cast<double>(skipped);
  v.metrics["N"] = static_cast<double>(opt.N);
  v.metrics["early"] = static_cast<double>(opt.early);
  v.metrics["worst_min"] = static_cast<double>(worst_min);
  v.metrics["fraction_min_ok"] = static_cast<double>(above) / n;
  v.metrics["fraction_max_rising"] = static_cast<double>(rising) / n;
  v.metrics["fraction_range_widening"] = static_cast<double>(widening) / n;
  v.metrics["fraction_both_signs"] = static_cast<double>(both_signs) / n;
  v.metrics["uncertain_steps"] = static_cast<double>(uncertain);

  if (used < opt.count) {
    v.status = Status::NoCertificate;
    v.exact["note"] = "too few samples survive the filter";
    return v;
  }
  if (uncertain > 0) {
    v.status = Status::NoCertificate;
    return v;
  }
  const double frac_needed = opt.trend_fraction;
  switch (spec.kind) {
    case SystemKind::F2:
      v.status = Status::NoCertificate;
      v.exact["note"] = "report only";
      break;
    case SystemKind::G:
      v.status = static_cast<double>(widening) / n >= frac_needed ? Status::Verified
                                                                  : Status::Violated;
      if (v.status == Status::Violated) {
        v.witness = Witness{opt.N, "range trend",
                            std::to_string(widening) + "/" + std::to_string(used)};
      }
      break;
    default:
      if (above != used) {
        v.status = Status::Violated;
        v.witness = Witness{min_witness, "sample index",
                            "fiber below -" + std::to_string(opt.min_bound)};
      } else if (static_cast<double>(rising) / n < frac_needed) {
        v.status = Status::Violated;
        v.witness = Witness{opt.N, "max trend",
                            std::to_string(rising) + "/" + std::to_string(used)};
      } else {
        v.status = Status::Verified;
      }
  }
  return v;
}

// ---------------------------------------------------------------- shrinking targets

QReal ShrinkRule::radius(std::int64_t i) const {
  switch (kind) {
    case Kind::Harmonic:
      return scale * QReal::rational(Rational(1, BigInt(static_cast<long>(i))));
    case Kind::PowerLaw: {
      BigInt den;
      mpz_pow_ui(den.get_mpz_t(), BigInt(static_cast<long>(i)).get_mpz_t(),
                 static_cast<unsigned long>(power));
      return scale * QReal::rational(Rational(BigInt(1), den));
    }
    case Kind::Custom:
      if (i < N || i - N >= static_cast<std::int64_t>(custom.size())) {
        throw Error("custom radius list does not cover i=" + std::to_string(i));
      }
      return custom[static_cast<std::size_t>(i - N)];
  }
  return QReal();
}

void ShrinkRule::validate() const {
  if (N < 1 || M < N) throw Error("shrink horizon needs 1 <= N <= M");
  if (power < 1 && kind == Kind::PowerLaw) throw Error("power must be >= 1");
  if (kind == Kind::Custom && static_cast<std::int64_t>(custom.size()) != M - N + 1) {
    throw Error("custom radii must list a_N..a_M");
  }
  QReal prev;
  for (std::int64_t i = N; i <= M; ++i) {
    const QReal a = radius(i);
    if (a.sign() <= 0) throw Error("radii must be positive");
    if (i > N && a > prev) throw Error("radii must be nonincreasing");
    prev = a;
    if (kind != Kind::Custom && i > N) break;  // closed forms decrease
  }
}

ShrinkExact shrink_exact(const Construction& c, const ShrinkTarget& target, const ShrinkRule& rule,
                         const std::vector<std::int64_t>& checkpoints) {
  rule.validate();
  if (rule.M > iteration_budget()) throw BudgetExceeded("shrink horizon exceeds budget");
  const SkewSystem sys(c, SystemSpec{SystemKind::Ttrunc});
  const PiecewiseFunction& f = sys.function();
  const QReal& alpha = c.alpha();

  struct Event {
    std::int64_t m;
    QReal offset;
  };
  ShrinkExact out;
  std::vector<QReal> z;  // z[m] = frac(y - m alpha)
  std::vector<std::int64_t> fz;  // f(z[m])
  std::vector<Event> events;
  z.push_back(target.y.value());
  fz.push_back(0);
  std::int64_t F = 0;  // sum_{m<=i} f(z_m)
  bool u_prefix = false;  // some unshifted f(z_m) was undecided
  ArcUnion sheets[2];
  ArcUnion undecided[2];
  std::vector<std::int64_t> cps = checkpoints;
  std::sort(cps.begin(), cps.end());
  std::size_t next_cp = 0;

  for (std::int64_t i = 1; i <= rule.M; ++i) {
    QReal zi = z.back() - alpha;
    if (zi.sign() < 0) zi += kOne;
    const Piece& pc = f.at(zi);
    out.uncertain = out.uncertain || pc.uncertain;
    u_prefix = u_prefix || pc.uncertain;
    F += pc.jump;
    z.push_back(zi);
    fz.push_back(pc.jump);
    const QReal ai = rule.radius(i);
    for (const auto& cut : f.cuts()) {
      QReal off = signed_offset(cut, zi);
      if (abs(off) < ai) events.push_back(Event{i, std::move(off)});
    }
    if (i < rule.N) continue;

    const QReal reach = min(ai, kHalf);
    std::vector<QReal> breaks{-reach};
    std::vector<std::int64_t> active;
    for (const auto& e : events) {
      if (!(abs(e.offset) < ai)) continue;
      if (e.offset > -reach && e.offset < reach) breaks.push_back(e.offset);
      if (active.empty() || active.back() != e.m) active.push_back(e.m);
    }
    std::sort(breaks.begin(), breaks.end(), [](const QReal& u, const QReal& w) { return u < w; });
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.push_back(reach);
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
      const QReal& d = breaks[b];
      std::int64_t corr = 0;
      bool shaky = false;
      for (std::int64_t m : active) {
        const Piece& shifted = f.at(frac(z[static_cast<std::size_t>(m)] + d));
        shaky = shaky || shifted.uncertain;
        corr += shifted.jump - fz[static_cast<std::size_t>(m)];
      }
      const int sheet = static_cast<int>(((target.sheet - F - corr) % 2 + 2) % 2);
      const Arc piece(CirclePoint(zi + d), breaks[b + 1] - d);
      sheets[sheet].insert(piece);
      if (shaky || u_prefix) undecided[sheet].insert(piece);
      out.uncertain = out.uncertain || shaky;
    }
    while (next_cp < cps.size() && cps[next_cp] <= i) {
      if (cps[next_cp] == i) out.prefix.emplace_back(i, sheets[0].measure() + sheets[1].measure());
      ++next_cp;
    }
  }
  out.measure = sheets[0].measure() + sheets[1].measure();
  out.uncertain_measure = undecided[0].measure() + undecided[1].measure();
  return out;
}

ShrinkEstimate shrink_estimate(const Construction& c, const ShrinkTarget& target,
                               const ShrinkRule& rule, std::int64_t samples, std::uint64_t seed,
                               int jobs) {
  rule.validate();
  if (samples < 1) throw Error("need at least one sample");
  require_budget(rule.M, "shrink");
  const SkewSystem sys(c, SystemSpec{SystemKind::Ttrunc});
  const BigInt grid_den = BigInt(1) << 32;
  const QReal grid = QReal::rational(Rational(BigInt(1), grid_den));

  std::vector<QReal> a(static_cast<std::size_t>(rule.M + 1));
  std::vector<long double> a_ld(a.size());
  for (std::int64_t i = rule.N; i <= rule.M; ++i) {
    a[static_cast<std::size_t>(i)] = rule.radius(i);
    a_ld[static_cast<std::size_t>(i)] = to_ld(a[static_cast<std::size_t>(i)]);
  }
  const long double y_ld = to_ld(target.y.value());
  constexpr long double kMargin = 1e-12L;

  std::vector<std::int64_t> hits, shaky;
  std::mutex lock;
  parallel_shards(samples, jobs, [&](std::int64_t begin, std::int64_t end) {
    Orbit o(c.alpha(), sys.function(), grid, sys.group());
    std::mt19937_64 rng(seed);
    rng.discard(static_cast<unsigned long long>(begin));
    std::int64_t h = 0, u = 0;
    for (std::int64_t s = begin; s < end; ++s) {
      const std::uint64_t r = rng();
      o.reset(QReal::rational(Rational(BigInt(static_cast<unsigned long>(r >> 32)), grid_den)),
              static_cast<std::int64_t>(r & 1));
      bool hit = false;
      o.run(rule.M, [&](const auto& core) {
        const std::int64_t i = core.time();
        if (i < rule.N || core.fiber() != target.sheet) return true;
        const auto idx = static_cast<std::size_t>(i);
        const long double dist = circ_dist_ld(static_cast<long double>(core.approx()), y_ld);
        if (dist > a_ld[idx] + kMargin) return true;
        if (dist < a_ld[idx] - kMargin || circle_dist(CirclePoint(core.x()), target.y) < a[idx]) {
          hit = true;
          return false;
        }
        return true;
      });
      if (hit) ++h;
      if (o.uncertain()) ++u;
    }
    const std::lock_guard<std::mutex> guard(lock);
    hits.push_back(h);
    shaky.push_back(u);
  });

  ShrinkEstimate est;
  est.samples = samples;
  for (auto h : hits) est.hits += h;  // integer sums: order-free
  for (auto u : shaky) est.uncertain += u;
  const double p = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.measure = 2.0 * p;
  est.stderr_ = 2.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return est;
}

void parallel_shards(std::int64_t n, int jobs,
                     const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  const std::int64_t workers = std::clamp<std::int64_t>(jobs, 1, n);
  if (workers == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (std::int64_t w = 0; w < workers; ++w) {
    const std::int64_t begin = n * w / workers;
    const std::int64_t end = n * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ShrinkTarget random_target(std::uint64_t seed, int index) {
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1)));
  const std::uint64_t r = rng();
  return ShrinkTarget{
      CirclePoint(QReal::rational(Rational(BigInt(static_cast<unsigned long>(r >> 32)),
                                           BigInt(1) << 32))),
      0};
}

}  // namespace skewlab

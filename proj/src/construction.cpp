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

#include "skewlab/construction.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <regex>
#include <set>

#include <nlohmann/json.hpp>

#include "skewlab/engine.hpp"

namespace skewlab {

namespace {

const QReal kOne = QReal::integer(1);

std::size_t pow_size(std::size_t base, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::size_t>::max() / base) throw Error("index map overflow");
    r *= base;
  }
  return r;
}

}  // namespace

const char* to_string(Membership3 m) {
  switch (m) {
    case Membership3::In:
      return "In";
    case Membership3::Out:
      return "Out";
    case Membership3::Uncertain:
      return "Uncertain";
  }
  return "?";
}

std::int64_t iteration_budget() {
  if (const char* env = std::getenv("SKEWLAB_BUDGET")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 100'000'000;
}

void require_budget(std::int64_t n, const char* what) {
  const std::int64_t cap = iteration_budget();
  if (n > cap) {
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(n) +
                         " iterations exceed budget " + std::to_string(cap));
  }
}

// ---------------------------------------------------------------- IndexMaps

IndexMaps IndexMaps::preset(const std::string& name) {
  IndexMaps m;
  m.name_ = name;
  if (name == "paper") {
    m.kind_ = Kind::Paper;
  } else if (name == "geometric") {
    m.kind_ = Kind::Geometric;
  } else if (name == "linear") {
    m.kind_ = Kind::Linear;
  } else {
    throw Error("unknown preset '" + name + "' (expected paper, geometric or linear)");
  }
  return m;
}

IndexMaps IndexMaps::custom(std::vector<std::size_t> f, std::vector<std::size_t> g,
                            std::vector<std::size_t> h1, std::vector<std::size_t> h2) {
  IndexMaps m;
  m.kind_ = Kind::Custom;
  m.name_ = "custom";
  if (f.empty() || f.size() != g.size()) throw Error("custom maps need equal nonempty f and g");
  if (h1.size() != h2.size()) throw Error("custom maps need equal-length h1 and h2");
  m.lists_[0] = std::move(f);
  m.lists_[1] = std::move(g);
  m.lists_[2] = std::move(h1);
  m.lists_[3] = std::move(h2);
  return m;
}

bool IndexMaps::has_h() const { return kind_ != Kind::Custom || !lists_[2].empty(); }

std::size_t IndexMaps::defined_levels() const {
  return kind_ == Kind::Custom ? lists_[0].size() : std::numeric_limits<std::size_t>::max();
}

std::size_t IndexMaps::defined_h_levels() const {
  return kind_ == Kind::Custom ? lists_[2].size() : std::numeric_limits<std::size_t>::max();
}

std::size_t IndexMaps::eval(int which, std::size_t k) const {
  if (k == 0) throw Error("index maps are 1-based");
  // Multipliers of the base sequence for f, g, h1, h2.
  static constexpr std::size_t paper[4] = {1, 2, 3, 6};
  static constexpr std::size_t geometric[4] = {2, 4, 6, 12};
  switch (kind_) {
    case Kind::Paper:
      return paper[which] * pow_size(10, k);
    case Kind::Geometric:
      return geometric[which] * pow_size(3, k);
    case Kind::Linear: {
      static constexpr std::size_t slope[4] = {4, 4, 8, 8};
      static constexpr std::size_t offset[4] = {2, 0, 4, 0};
      return slope[which] * k - offset[which];
    }
    case Kind::Custom:
      if (k > lists_[which].size()) {
        throw Error("custom index map undefined at level " + std::to_string(k));
      }
      return lists_[which][k - 1];
  }
  return 0;
}

std::size_t IndexMaps::f(std::size_t k) const { return eval(0, k); }
std::size_t IndexMaps::g(std::size_t k) const { return eval(1, k); }
std::size_t IndexMaps::h1(std::size_t k) const { return eval(2, k); }
std::size_t IndexMaps::h2(std::size_t k) const { return eval(3, k); }

std::vector<std::string> interleaving_issues(const IndexMaps& maps, std::size_t levels) {
  std::vector<std::string> issues;
  if (maps.defined_levels() < levels) {
    issues.push_back("maps define " + std::to_string(maps.defined_levels()) +
                     " levels, construction needs " + std::to_string(levels));
    levels = maps.defined_levels();
  }
  for (std::size_t k = 1; k <= levels; ++k) {
    const std::size_t fk = maps.f(k);
    const std::size_t gk = maps.g(k);
    if (fk == 0 || gk == 0) issues.push_back("level " + std::to_string(k) + ": zero index");
    if (!(fk < gk)) {
      issues.push_back("level " + std::to_string(k) + ": f(k)=" + std::to_string(fk) +
                       " not below g(k)=" + std::to_string(gk));
    }
    if (k < levels && !(gk < maps.f(k + 1))) {
      issues.push_back("level " + std::to_string(k) + ": g(k)=" + std::to_string(gk) +
                       " not below f(k+1)=" + std::to_string(maps.f(k + 1)));
    }
  }
  if (maps.has_h()) {
    const std::size_t hl = std::min(levels, maps.defined_h_levels());
    for (std::size_t k = 1; k < hl; ++k) {
      if (!(maps.h1(k) < maps.h1(k + 1)) || !(maps.h2(k) < maps.h2(k + 1))) {
        issues.push_back("level " + std::to_string(k) + ": h1/h2 not increasing");
      }
    }
  }
  return issues;
}

// ---------------------------------------------------------------- LimitArc

Arc LimitArc::certain() const {
  if (!(len_min > lo_width)) return Arc();
  return Arc(CirclePoint(lo_min + lo_width), len_min - lo_width);
}

Arc LimitArc::possible() const {
  const QReal len = lo_width + len_max;
  return Arc(CirclePoint(lo_min), len > kOne ? kOne : len);
}

std::vector<Arc> LimitArc::band() const {
  std::vector<Arc> out;
  const Arc in = certain();
  if (in.is_empty()) {
    out.push_back(possible());
    return out;
  }
  if (lo_width.sign() > 0) out.emplace_back(CirclePoint(lo_min), lo_width);
  const QReal right = lo_width + len_max - len_min;
  if (right.sign() > 0) out.emplace_back(CirclePoint(lo_min + len_min), right);
  return out;
}

Membership3 LimitArc::membership(const CirclePoint& p) const {
  if (arc_contains(certain(), p)) return Membership3::In;
  if (arc_contains(possible(), p)) return Membership3::Uncertain;
  return Membership3::Out;
}

// ---------------------------------------------------------------- build

namespace {

// p_n, q_n at the requested indices, by streaming the recurrences.
std::map<std::size_t, Convergent> convergents_at(const ContinuedFraction& cf,
                                                 const std::set<std::size_t>& wanted) {
  std::map<std::size_t, Convergent> out;
  if (wanted.empty()) return out;
  const std::size_t last = *wanted.rbegin();
  BigInt p_prev = 1, q_prev = 0;
  BigInt p = cf.term(0), q = 1;
  for (std::size_t i = 0;; ++i) {
    if (wanted.count(i)) out[i] = Convergent{i, p, q};
    if (i == last) break;
    const BigInt& a = cf.term(i + 1);
    BigInt pn = a * p + p_prev;
    BigInt qn = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(pn);
    q = std::move(qn);
  }
  return out;
}

struct Level {
  BigInt q;
  QReal gap;  // q * alpha - p, verified in (0, 1)
};

Level level_at(const QReal& alpha, const std::map<std::size_t, Convergent>& conv,
               std::size_t index, const std::string& what) {
  const Convergent& cv = conv.at(index);
  QReal gap = alpha * QReal::integer(cv.q) - QReal::integer(cv.p);
  if (gap.sign() <= 0) {
    throw Error("sign condition violated: q_n alpha - p_n <= 0 for " + what + " (n=" +
                std::to_string(index) + ")");
  }
  const QReal bound = QReal::rational(Rational(BigInt(1), conv.at(index + 1).q));
  if (!(gap < bound)) {
    throw Error("convergent gap bound fails for " + what + " (n=" + std::to_string(index) + ")");
  }
  return Level{cv.q, std::move(gap)};
}

QReal two_over(const BigInt& q) { return QReal::rational(Rational(BigInt(2), q)); }

}  // namespace

Construction Construction::build(const QReal& alpha, const IndexMaps& maps, std::size_t depth) {
  if (alpha.is_rational()) throw Error("alpha must be irrational");
  if (alpha.sign() <= 0 || !(alpha < QReal::rational(Rational(1, 3)))) {
    throw Error("alpha must lie in (0, 1/3)");
  }
  if (depth < 1) throw Error("depth must be >= 1");
  const std::size_t levels = depth + 1;
  if (const auto issues = interleaving_issues(maps, levels); !issues.empty()) {
    std::string msg = "index maps rejected:";
    for (const auto& s : issues) msg += " " + s + ";";
    throw Error(msg);
  }
  const bool with_g = maps.has_h() && maps.defined_h_levels() >= levels;

  std::set<std::size_t> wanted;
  for (std::size_t k = 1; k <= levels; ++k) {
    for (std::size_t n : {maps.f(k), maps.g(k)}) {
      wanted.insert(n);
      wanted.insert(n + 1);
    }
    if (with_g) {
      for (std::size_t n : {maps.h1(k), maps.h2(k)}) {
        wanted.insert(n);
        wanted.insert(n + 1);
      }
    }
  }
  const ContinuedFraction cf = continued_fraction(alpha, *wanted.rbegin());
  if (cf.rational) throw Error("alpha has a terminating continued fraction");
  const auto conv = convergents_at(cf, wanted);

  Construction c;
  c.alpha_ = alpha;
  c.maps_ = maps;
  c.depth_ = depth;
  c.c_.assign(levels + 1, BigInt(0));
  c.b_.assign(levels + 1, BigInt(0));
  c.c_sum_.assign(levels + 1, BigInt(0));
  c.b_sum_.assign(levels + 1, BigInt(0));
  c.gamma_.assign(levels + 1, QReal());
  c.beta_.assign(levels + 1, QReal());
  c.theta_.assign(levels + 1, QReal());
  c.y_.assign(levels + 1, QReal());
  c.y_[0] = alpha;
  for (std::size_t k = 1; k <= levels; ++k) {
    Level lc = level_at(alpha, conv, maps.f(k), "c_" + std::to_string(k));
    Level lb = level_at(alpha, conv, maps.g(k), "b_" + std::to_string(k));
    c.c_[k] = lc.q;
    c.b_[k] = lb.q;
    c.gamma_[k] = lc.gap;
    c.beta_[k] = lb.gap;
    c.c_sum_[k] = c.c_sum_[k - 1] + lc.q;
    c.b_sum_[k] = c.b_sum_[k - 1] + lb.q;
    c.theta_[k] = c.theta_[k - 1] + lc.gap;
    c.y_[k] = frac(c.y_[k - 1] + lb.gap);
    if (k > 1 && !(c.gamma_[k] < c.gamma_[k - 1] && c.beta_[k] < c.beta_[k - 1])) {
      throw Error("gamma/beta not strictly decreasing at level " + std::to_string(k));
    }
  }
  if (!(c.theta_[levels] < kOne)) throw Error("sum of gamma reaches 1");
  if (!(frac_multiple(alpha, c.c_sum_[depth]) == c.theta_[depth])) {
    throw Error("theta_K differs from frac(sum c_i * alpha)");
  }

  // Tails: every later gap is below 1/q_{n+1} and q_{n+2} >= 2 q_n, so the sum
  // past level K is below twice the first bound.
  c.tail_c_ = two_over(conv.at(maps.f(levels) + 1).q);
  c.tail_b_ = two_over(conv.at(maps.g(levels) + 1).q);

  ArcUnion jk;
  jk.insert(c.J_k(depth));
  jk.insert(c.shifted_J_k(c.y_[depth], depth));
  if (!(jk.measure() == c.theta_[depth] + c.theta_[depth])) {
    throw Error("J_K and y_K + J_K overlap");
  }

  const QReal& thK = c.theta_[depth];
  c.J_ = LimitArc{QReal(), QReal(), thK + c.gamma_[levels], thK + c.tail_c_};
  c.Jprime_ = LimitArc{frac(c.y_[depth] + c.beta_[levels]), c.tail_b_ - c.beta_[levels],
                       thK + c.gamma_[levels], thK + c.tail_c_};
  ArcUnion limit;
  limit.insert(c.J_.possible());
  limit.insert(c.Jprime_.possible());
  if (!(limit.measure() == c.J_.possible().length() + c.Jprime_.possible().length())) {
    c.warnings_.push_back("uncertainty bands of J and J' overlap");
  }

  if (with_g) {
    QReal u, z;
    for (std::size_t k = 1; k <= depth; ++k) {
      u += level_at(alpha, conv, maps.h1(k), "h1_" + std::to_string(k)).gap;
      z += level_at(alpha, conv, maps.h2(k), "h2_" + std::to_string(k)).gap;
    }
    const QReal u_next = level_at(alpha, conv, maps.h1(levels), "h1 lookahead").gap;
    const QReal z_next = level_at(alpha, conv, maps.h2(levels), "h2 lookahead").gap;
    const QReal tail_u = two_over(conv.at(maps.h1(levels) + 1).q);
    const QReal tail_z = two_over(conv.at(maps.h2(levels) + 1).q);
    const QReal five_alpha = frac(alpha * QReal::integer(5));
    c.U_ = LimitArc{five_alpha, QReal(), u + u_next, u + tail_u};
    c.zU_ = LimitArc{frac(five_alpha + z + z_next), tail_z - z_next, u + u_next, u + tail_u};
    c.has_g_ = true;
  }

  QReal running;
  for (std::size_t k = 1; k <= depth; ++k) {
    LevelBound lb;
    lb.k = k;
    lb.c_bound = QReal::integer(c.b_sum_[k]) * c.gamma_[k + 1];
    lb.b_bound = QReal::integer(c.c_sum_[k]) * c.beta_[k + 1];
    lb.sk_bound = QReal::integer(c.c_sum_[k]) * c.beta_[k];
    running += lb.sk_bound + lb.c_bound;
    c.bounds_.push_back(std::move(lb));
  }
  if (!(running < kOne)) c.warnings_.push_back("sum of exceptional-set measures is >= 1");
  return c;
}

namespace {
void check_level(std::size_t k, std::size_t hi) {
  if (k > hi) throw Error("level " + std::to_string(k) + " beyond " + std::to_string(hi));
}
}  // namespace

const BigInt& Construction::c(std::size_t k) const {
  check_level(k, depth_ + 1);
  if (k == 0) throw Error("levels start at 1");
  return c_[k];
}
const BigInt& Construction::b(std::size_t k) const {
  check_level(k, depth_ + 1);
  if (k == 0) throw Error("levels start at 1");
  return b_[k];
}
const QReal& Construction::gamma(std::size_t k) const {
  check_level(k, depth_ + 1);
  if (k == 0) throw Error("levels start at 1");
  return gamma_[k];
}
const QReal& Construction::beta(std::size_t k) const {
  check_level(k, depth_ + 1);
  if (k == 0) throw Error("levels start at 1");
  return beta_[k];
}
const QReal& Construction::theta(std::size_t k) const {
  check_level(k, depth_ + 1);
  return theta_[k];
}
const QReal& Construction::y(std::size_t k) const {
  check_level(k, depth_ + 1);
  return y_[k];
}
const BigInt& Construction::c_sum(std::size_t k) const {
  check_level(k, depth_ + 1);
  return c_sum_[k];
}
const BigInt& Construction::b_sum(std::size_t k) const {
  check_level(k, depth_ + 1);
  return b_sum_[k];
}

Arc Construction::J_k(std::size_t k) const { return Arc(CirclePoint(), theta(k)); }

Arc Construction::shifted_J_k(const QReal& by, std::size_t k) const {
  return Arc(CirclePoint(by), theta(k));
}

Arc Construction::theta_band(std::size_t k) const {
  return Arc(CirclePoint(theta(k)), gamma(k + 1));
}

Arc Construction::y_band(std::size_t k) const {
  if (k == 0) throw Error("levels start at 1");
  return Arc(CirclePoint(y(k - 1)), beta(k));
}

const LimitArc& Construction::U() const {
  if (!has_g_) throw Error("construction has no h1/h2 maps");
  return U_;
}

const LimitArc& Construction::zU() const {
  if (!has_g_) throw Error("construction has no h1/h2 maps");
  return zU_;
}

Membership3 membership_J(const Construction& c, const CirclePoint& p) {
  return c.J().membership(p);
}

Membership3 membership_Jprime(const Construction& c, const CirclePoint& p) {
  return c.Jprime().membership(p);
}

// ---------------------------------------------------------------- scans

std::int64_t first_visit(const QReal& alpha, const Arc& arc, const CirclePoint& p,
                         std::int64_t count, int direction) {
  if (count > iteration_budget()) {
    throw BudgetExceeded("scan of " + std::to_string(count) + " steps exceeds budget " +
                         std::to_string(iteration_budget()));
  }
  if (count <= 0 || arc.is_empty()) return 0;
  const PiecewiseFunction f = compile_terms({Term{arc, 0, false, 1}});
  Orbit orbit(alpha, f, p.value(), FiberGroup::Z);
  std::int64_t hit = 0;
  orbit.run(direction >= 0 ? count : -count, [&](const auto& core) {
    if (core.tags() & 1u) {
      hit = core.time() < 0 ? -core.time() : core.time();
      return false;
    }
    return true;
  });
  return hit;
}

namespace {
std::int64_t to_count(const BigInt& n) {
  if (!n.fits_slong_p()) {
    throw BudgetExceeded("scan range " + n.get_str() + " exceeds budget " +
                         std::to_string(iteration_budget()));
  }
  return n.get_si();
}

void check_k(const Construction& c, std::size_t k) {
  if (k < 1 || k > c.depth()) throw Error("level k must lie in [1, depth]");
}
}  // namespace

bool in_B(const Construction& c, std::size_t k, const CirclePoint& p) {
  check_k(c, k);
  return first_visit(c.alpha(), c.y_band(k), p, to_count(c.c_sum(k)), -1) != 0;
}

bool in_C(const Construction& c, std::size_t k, const CirclePoint& p) {
  check_k(c, k);
  return first_visit(c.alpha(), c.theta_band(k), p, to_count(c.b_sum(k)), -1) != 0;
}

bool in_Bprime(const Construction& c, std::size_t k, const CirclePoint& p) {
  check_k(c, k);
  const BigInt range = BigInt(static_cast<unsigned long>(k * k)) * c.c(k);
  return first_visit(c.alpha(), c.y_band(k), p, to_count(range), +1) != 0;
}

bool in_Cprime(const Construction& c, std::size_t k, const CirclePoint& p) {
  check_k(c, k);
  const BigInt range = BigInt(static_cast<unsigned long>(k * k)) * c.b(k);
  return first_visit(c.alpha(), c.theta_band(k), p, to_count(range), +1) != 0;
}

GrowthReport validate_growth(const Construction& c) {
  GrowthReport r;
  r.issues = interleaving_issues(c.maps(), c.depth() + 1);
  QReal running;
  for (const auto& lb : c.level_bounds()) {
    GrowthRow row;
    row.k = lb.k;
    row.c_bound = lb.c_bound;
    row.b_bound = lb.b_bound;
    running += lb.sk_bound + lb.c_bound;
    row.running_sum = running;
    row.skew_prerequisite = c.c(lb.k + 1) > c.b_sum(lb.k);
    if (!row.skew_prerequisite) {
      r.issues.push_back("level " + std::to_string(lb.k) + ": c_{k+1} <= sum of b_i");
    }
    r.rows.push_back(std::move(row));
  }
  if (!(running < kOne)) r.issues.push_back("running sum of exceptional measures >= 1");
  for (const auto& w : c.warnings()) r.issues.push_back(w);
  r.passed = r.issues.empty();
  return r;
}

// ---------------------------------------------------------------- config

QReal default_alpha() { return make_qreal(-2, 1, 1, 1, 5); }

namespace {

Rational parse_rational(const std::string& s) {
  static const std::regex re(R"(^(-?\d+)(?:/(-?\d+))?$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw Error("bad rational '" + s + "'");
  BigInt num(m[1].str(), 10);
  BigInt den = m[2].matched ? BigInt(m[2].str(), 10) : BigInt(1);
  if (den == 0) throw Error("zero denominator in '" + s + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigInt json_integer(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw Error(std::string("alpha object missing '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_number_integer()) return BigInt(v.get<long>());
  if (v.is_string()) {
    const std::string text = v.get<std::string>();
    static const std::regex re(R"(^-?\d+$)");
    if (!std::regex_match(text, re)) throw Error(std::string("alpha field '") + key + "' is not an integer");
    return BigInt(text, 10);
  }
  throw Error(std::string("alpha field '") + key + "' must be an integer");
}

std::vector<std::size_t> json_list(const nlohmann::json& j, const char* key) {
  std::vector<std::size_t> out;
  if (!j.contains(key)) return out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long>() > 0)) {
      throw Error(std::string("preset list '") + key + "' must hold positive integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

nlohmann::json integer_json(const BigInt& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

}  // namespace

QReal parse_alpha_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = spec.find(':', start);
    parts.push_back(spec.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 4 || parts[0] != "sqrt") {
    throw Error("alpha spec must look like sqrt:<d>:<a>:<b>, got '" + spec + "'");
  }
  static const std::regex int_re(R"(^\d+$)");
  if (!std::regex_match(parts[1], int_re)) throw Error("bad field parameter '" + parts[1] + "'");
  const std::int64_t d = std::stoll(parts[1]);
  const Rational a = parse_rational(parts[2]);
  const Rational b = parse_rational(parts[3]);
  return make_qreal(a.get_num(), a.get_den(), b.get_num(), b.get_den(), d);
}

ConstructionConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  ConstructionConfig cfg;
  if (j.contains("alpha")) {
    const auto& a = j.at("alpha");
    if (a.is_string()) {
      cfg.alpha = parse_alpha_spec(a.get<std::string>());
    } else if (a.is_object()) {
      const BigInt d = json_integer(a, "d");
      if (!d.fits_slong_p()) throw Error("field parameter too large");
      cfg.alpha = make_qreal(json_integer(a, "a_num"), json_integer(a, "a_den"),
                             json_integer(a, "b_num"), json_integer(a, "b_den"), d.get_si());
    } else {
      throw Error("'alpha' must be an object or a spec string");
    }
  }
  if (j.contains("preset")) {
    const auto& p = j.at("preset");
    if (p.is_string()) {
      cfg.maps = IndexMaps::preset(p.get<std::string>());
    } else if (p.is_object()) {
      cfg.maps = IndexMaps::custom(json_list(p, "f"), json_list(p, "g"), json_list(p, "h1"),
                                   json_list(p, "h2"));
    } else {
      throw Error("'preset' must be a name or an object of index lists");
    }
  }
  if (j.contains("depth")) {
    const auto& k = j.at("depth");
    if (!k.is_number_integer() || k.get<long>() < 1) throw Error("'depth' must be >= 1");
    cfg.depth = k.get<std::size_t>();
  }
  return cfg;
}

std::string config_to_json(const ConstructionConfig& cfg) {
  nlohmann::json j;
  const QReal& a = cfg.alpha;
  j["alpha"] = {{"a_num", integer_json(a.a().get_num())},
                {"a_den", integer_json(a.a().get_den())},
                {"b_num", integer_json(a.b().get_num())},
                {"b_den", integer_json(a.b().get_den())},
                {"d", a.d()}};
  if (cfg.maps.is_custom()) {
    nlohmann::json p;
    const char* keys[4] = {"f", "g", "h1", "h2"};
    for (int i = 0; i < 4; ++i) {
      if (!cfg.maps.list(i).empty()) p[keys[i]] = cfg.maps.list(i);
    }
    j["preset"] = p;
  } else {
    j["preset"] = cfg.maps.name();
  }
  j["depth"] = cfg.depth;
  return j.dump();
}

}  // namespace skewlab

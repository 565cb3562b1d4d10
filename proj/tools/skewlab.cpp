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

// skewlab: command-line front end. Exit codes: 0 verified or success,
// 1 violated, 2 usage error, 3 no certificate (uncertainty or budget).

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "skewlab/analysis.hpp"
#include "skewlab/report.hpp"

using namespace skewlab;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNoCertificate = 3;

struct Common {
  std::string alpha;
  std::string config;
  std::string preset;
  std::size_t depth = 0;
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 1;
};

ConstructionConfig resolve(const Common& o) {
  ConstructionConfig cfg;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw Error("cannot read config '" + o.config + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = parse_config(ss.str());
  }
  if (!o.alpha.empty()) cfg.alpha = parse_alpha_spec(o.alpha);
  if (!o.preset.empty()) cfg.maps = IndexMaps::preset(o.preset);
  if (o.depth != 0) cfg.depth = o.depth;
  return cfg;
}

Construction construct(const ConstructionConfig& cfg) {
  return Construction::build(cfg.alpha, cfg.maps, cfg.depth);
}

// "p/q", an integer, or an alpha-style spec for a field element.
QReal parse_value(const std::string& s) {
  if (s.rfind("sqrt:", 0) == 0) return parse_alpha_spec(s);
  return parse_alpha_spec("sqrt:2:" + s + ":0");
}

SkewState parse_state(const std::string& s) {
  const auto comma = s.rfind(',');
  if (comma == std::string::npos) throw Error("state must be 'x,h'");
  SkewState st;
  st.x = CirclePoint(parse_value(s.substr(0, comma)));
  try {
    st.h = std::stoll(s.substr(comma + 1));
  } catch (const std::exception&) {
    throw Error("bad fiber value in '" + s + "'");
  }
  return st;
}

std::vector<std::int64_t> parse_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw Error("");
    } catch (const std::exception&) {
      throw Error("bad integer list '" + s + "'");
    }
  }
  return out;
}

// Set by --fk-all-levels; applies to every F_k spec parsed afterwards.
bool fk_all_levels = false;

// "Tk1" -> {Tk, 1}; names without a level keep k = 1.
SystemSpec parse_spec(std::string s) {
  std::size_t digits = s.size();
  while (digits > 0 && std::isdigit(static_cast<unsigned char>(s[digits - 1]))) --digits;
  SystemSpec spec;
  if (digits < s.size() && digits > 0) {
    spec.k = std::stoul(s.substr(digits));
    s = s.substr(0, digits);
  }
  spec.kind = parse_system(s);
  spec.fk_all_levels = spec.kind == SystemKind::Fk && fk_all_levels;
  return spec;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

ojson qjson(const QReal& x) {
  return ojson{{"decimal", to_decimal(x)}, {"exact", to_exact_string(x)}};
}

ojson arc_json(const Arc& a) {
  return ojson{{"lo", qjson(a.lo().value())}, {"length", qjson(a.length())}};
}

ojson limit_json(const LimitArc& a) {
  ojson bands = ojson::array();
  for (const auto& b : a.band()) bands.push_back(arc_json(b));
  return ojson{{"certain", arc_json(a.certain())}, {"possible", arc_json(a.possible())},
               {"bands", bands}};
}

// Canonical "key=value" list for the report digest.
std::string args_string(const std::map<std::string, std::string>& args) {
  std::string s;
  for (const auto& [k, v] : args) s += k + "=" + v + ";";
  return s;
}

int cmd_cf(const Common& o, std::size_t count) {
  const QReal alpha = o.alpha.empty() ? default_alpha() : parse_alpha_spec(o.alpha);
  if (alpha.is_rational()) throw Error("alpha must be irrational");
  const auto conv = convergents(alpha, count);
  const ContinuedFraction cf = continued_fraction(alpha, count);
  std::ostringstream os;
  os << "i,a,p,q,q_err\n";
  if (count == 0) {
    emit(os.str(), o.out);
    return 0;
  }
  for (const auto& cv : conv) {
    const QReal err = abs(alpha * QReal::integer(cv.q) - QReal::integer(cv.p)) *
                      QReal::integer(cv.q);
    os << cv.index << "," << cf.term(cv.index).get_str() << "," << cv.p.get_str() << ","
       << cv.q.get_str() << "," << to_decimal(err) << "\n";
  }
  emit(os.str(), o.out);
  return 0;
}

int cmd_build(const Common& o) {
  const ConstructionConfig cfg = resolve(o);
  const Construction c = construct(cfg);
  ojson j;
  j["config"] = ojson::parse(config_to_json(cfg));
  ojson levels = ojson::array();
  for (std::size_t k = 1; k <= c.depth() + 1; ++k) {
    levels.push_back(ojson{{"k", k},
                           {"f", c.maps().f(k)},
                           {"g", c.maps().g(k)},
                           {"c", c.c(k).get_str()},
                           {"b", c.b(k).get_str()},
                           {"gamma", qjson(c.gamma(k))},
                           {"beta", qjson(c.beta(k))},
                           {"theta", qjson(c.theta(k))},
                           {"y", qjson(c.y(k))},
                           {"c_sum", c.c_sum(k).get_str()},
                           {"b_sum", c.b_sum(k).get_str()}});
  }
  j["levels"] = levels;
  j["tail_c"] = qjson(c.tail_c());
  j["tail_b"] = qjson(c.tail_b());
  j["J"] = limit_json(c.J());
  j["Jprime"] = limit_json(c.Jprime());
  if (c.has_g_system()) {
    j["U"] = limit_json(c.U());
    j["zU"] = limit_json(c.zU());
  }
  const GrowthReport g = validate_growth(c);
  ojson rows = ojson::array();
  for (const auto& r : g.rows) {
    rows.push_back(ojson{{"k", r.k},
                         {"c_bound", qjson(r.c_bound)},
                         {"b_bound", qjson(r.b_bound)},
                         {"running_sum", qjson(r.running_sum)},
                         {"skew_prerequisite", r.skew_prerequisite}});
  }
  j["growth"] = ojson{{"passed", g.passed}, {"rows", rows}, {"issues", g.issues}};
  j["warnings"] = c.warnings();
  emit(j.dump(2) + "\n", o.out);
  return 0;
}

int cmd_orbit(const Common& o, const std::string& system, std::size_t k, const std::string& start,
              std::int64_t steps, std::int64_t stride, bool exact) {
  const Construction c = construct(resolve(o));
  SystemSpec spec = parse_spec(system);
  spec.k = k;
  const SkewSystem sys(c, spec);
  const SkewState s0 = parse_state(start);
  std::ostringstream os;
  os << "n,x,h,uncertain" << (exact ? ",x_exact" : "") << "\n";
  auto row = [&](std::int64_t n, const SkewState& s) {
    os << n << "," << to_decimal(s.x.value()) << "," << s.h << "," << (s.uncertain ? 1 : 0);
    if (exact) os << "," << to_exact_string(s.x.value());
    os << "\n";
  };
  orbit(sys, s0, steps, std::max<std::int64_t>(stride, 1), row);
  emit(os.str(), o.out);
  return 0;
}

struct VerifyArgs {
  std::int64_t steps = 0;  // 0 = per-check default
  std::size_t k = 1;
  std::int64_t jmax = 0;
  std::int64_t perturb = 0;
  bool swap = false;
  std::string pair = "Tk1,Sk2";
  std::string start = "0,0";
  std::string n_list = "17,72,305,10000";
  std::int64_t C = 0;
  std::string threshold = "1/10";
  std::string system;
  std::string probe = "3/10,3/10";
  int sheet = 0;
  std::string checkpoints = "100000,1000000,10000000";
  double delta_min = 0.01;
  std::size_t samples = 100;
  std::int64_t early = 10'000;
  std::int64_t min_bound = 2;
  std::string eps = "1/20";
  std::string r_list = "0,10000";
  std::int64_t n_cap = 100'000;
};

std::int64_t or_default(std::int64_t v, std::int64_t d) { return v != 0 ? v : d; }

std::vector<Verdict> run_verify(const std::string& name, const Construction& c,
                                const VerifyArgs& a, int jobs) {
  if (name == "j-first") return {check_j_first(c, or_default(a.steps, 1'000'000), a.swap)};
  if (name == "comparison") return {check_comparison(c, or_default(a.steps, 1'000'000))};
  if (name == "small-shift") {
    const BigInt natural = a.k + 1 <= c.depth() ? c.c_sum(a.k + 1) : BigInt(0);
    const std::int64_t def = natural < 10'000 ? natural.get_si() : 10'000;
    return {check_small_shift(c, a.k, or_default(a.jmax, def), a.perturb)};
  }
  if (name == "density") {
    const auto comma = a.pair.find(',');
    if (comma == std::string::npos) throw Error("--pair must be 'A,B'");
    return {disagreement_density(c, parse_spec(a.pair.substr(0, comma)),
                                 parse_spec(a.pair.substr(comma + 1)), parse_state(a.start),
                                 or_default(a.steps, 1'000'000))};
  }
  if (name == "separation") {
    return {separation_check(c.alpha(), parse_list(a.n_list),
                             a.C > 0 ? std::optional<std::int64_t>(a.C) : std::nullopt)};
  }
  if (name == "dio") {
    const QReal t = parse_value(a.threshold);
    if (!t.is_rational()) throw Error("threshold must be rational");
    return {dio_check(c.alpha(), or_default(a.steps, 1'000'000), t.a())};
  }
  if (name == "skew") {
    return {skew_check(c, a.k, parse_state(a.start), or_default(a.steps, 1'000'000))};
  }
  if (name == "occupancy") {
    const auto comma = a.probe.find(',');
    if (comma == std::string::npos) throw Error("--probe must be 'lo,length'");
    const OccupancyProbe probe{Arc(CirclePoint(parse_value(a.probe.substr(0, comma))),
                                   parse_value(a.probe.substr(comma + 1))),
                               a.sheet};
    SystemSpec spec = parse_spec(a.system.empty() ? "Ttrunc" : a.system);
    if (uses_level(spec.kind)) spec.k = a.k;
    return {occupancy(c, spec, probe, parse_list(a.checkpoints), a.delta_min)};
  }
  if (name == "halfstrip") {
    HalfstripOptions opt;
    opt.N = or_default(a.steps, 1'000'000);
    opt.early = a.early;
    opt.min_bound = a.min_bound;
    opt.count = a.samples;
    opt.jobs = jobs;
    SystemSpec spec = parse_spec(a.system.empty() ? "ThatTrunc" : a.system);
    if (uses_level(spec.kind)) spec.k = a.k;
    // Twice the requested count leaves room for filtered points.
    return {halfstrip_scan(c, spec, sample_points(c.d(), 2 * a.samples + 16), opt)};
  }
  if (name == "dense-orbit") {
    return {dense_orbit_certificate(c, parse_value(a.eps), parse_list(a.r_list), a.n_cap)};
  }
  if (name == "all") {
    std::vector<Verdict> all;
    for (const char* n : {"j-first", "comparison", "small-shift", "separation", "dio"}) {
      VerifyArgs b = a;
      auto v = run_verify(n, c, b, jobs);
      all.insert(all.end(), v.begin(), v.end());
    }
    for (const char* pair : {"Tk1,Sk2", "Sk1,Tk1"}) {
      VerifyArgs b = a;
      b.pair = pair;
      auto v = run_verify("density", c, b, jobs);
      all.insert(all.end(), v.begin(), v.end());
    }
    auto v = run_verify("skew", c, a, jobs);
    all.insert(all.end(), v.begin(), v.end());
    return all;
  }
  throw Error("unknown check '" + name + "'");
}

int cmd_verify(const Common& o, const std::string& name, const VerifyArgs& a,
               const std::map<std::string, std::string>& args) {
  const ConstructionConfig cfg = resolve(o);
  const Construction c = construct(cfg);
  ReportContext ctx{config_to_json(cfg), "verify " + name + ";" + args_string(args), o.seed};
  std::vector<Verdict> vs;
  try {
    vs = run_verify(name, c, a, o.jobs);
  } catch (const BudgetExceeded& e) {
    Verdict v;
    v.name = name;
    v.status = Status::NoCertificate;
    v.exact["budget"] = e.what();
    vs.push_back(std::move(v));
  }
  emit((vs.size() == 1 ? verdict_json(vs.front(), ctx) : verdicts_json(name, vs, ctx)) + "\n",
       o.out);
  return exit_code(vs);
}

struct ShrinkArgs {
  int targets = 5;
  std::int64_t samples = 100'000;
  std::string rule = "harmonic";
  std::string scale = "1/10";
  int power = 1;
  std::int64_t N = 1;
  std::int64_t M = 1000;
  std::string target;  // "y,sheet"; random targets when empty
  bool exact_only = false;
};

int cmd_shrink(const Common& o, const ShrinkArgs& a, const std::map<std::string, std::string>& args) {
  const ConstructionConfig cfg = resolve(o);
  const Construction c = construct(cfg);
  ShrinkRule rule;
  rule.kind = a.rule == "power" ? ShrinkRule::Kind::PowerLaw : ShrinkRule::Kind::Harmonic;
  if (a.rule != "power" && a.rule != "harmonic") throw Error("--rule is harmonic or power");
  rule.scale = parse_value(a.scale);
  rule.power = a.power;
  rule.N = a.N;
  rule.M = a.M;
  rule.validate();

  std::vector<ShrinkTarget> targets;
  if (!a.target.empty()) {
    const SkewState s = parse_state(a.target);
    targets.push_back(ShrinkTarget{s.x, static_cast<int>(s.h & 1)});
  } else {
    for (int i = 0; i < a.targets; ++i) targets.push_back(random_target(o.seed, i));
  }
  std::vector<std::int64_t> cps;
  for (std::int64_t m = 10; m < a.M; m *= 10) {
    if (m >= a.N) cps.push_back(m);
  }
  cps.push_back(a.M);

  ojson rows = ojson::array();
  bool all_agree = true;
  bool monotone = true;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const ShrinkTarget& t = targets[i];
    const ShrinkExact ex = shrink_exact(c, t, rule, cps);
    ojson prefix = ojson::array();
    for (std::size_t p = 0; p < ex.prefix.size(); ++p) {
      prefix.push_back(ojson{{"M", ex.prefix[p].first}, {"measure", qjson(ex.prefix[p].second)}});
      if (p > 0 && ex.prefix[p].second < ex.prefix[p - 1].second) monotone = false;
    }
    ojson row{{"y", qjson(t.y.value())},
              {"sheet", t.sheet},
              {"exact", qjson(ex.measure)},
              {"uncertain_measure", qjson(ex.uncertain_measure)},
              {"prefix", prefix}};
    if (!a.exact_only) {
      const ShrinkEstimate est =
          shrink_estimate(c, t, rule, a.samples, o.seed + static_cast<std::uint64_t>(i), o.jobs);
      const double diff = std::fabs(est.measure - to_double(ex.measure));
      const double allowed = 3.0 * est.stderr_ + to_double(ex.uncertain_measure);
      const bool agree = diff <= allowed;
      all_agree = all_agree && agree;
      row["estimate"] = est.measure;
      row["stderr"] = est.stderr_;
      row["hits"] = est.hits;
      row["uncertain_samples"] = est.uncertain;
      row["difference"] = diff;
      row["agree"] = agree;
    }
    rows.push_back(row);
  }
  const bool ok = all_agree && monotone;
  ojson j;
  j["name"] = "shrink";
  j["status"] = ok ? "Verified" : "Violated";
  j["targets"] = rows;
  j["monotone_in_M"] = monotone;
  j["config_digest"] = [&] {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a64(config_to_json(cfg) + "\n" + "shrink;" + args_string(args))));
    return std::string(buf);
  }();
  j["seed"] = o.seed;
  emit(j.dump() + "\n", o.out);
  return ok ? 0 : 1;
}

// Empirical occupancy of probe arcs along orbits from the given starts.
int cmd_measure(const Common& o, const std::string& system, std::size_t k,
                const std::vector<std::string>& starts, const std::vector<std::string>& probes,
                const std::string& checkpoints) {
  const ConstructionConfig cfg = resolve(o);
  const Construction c = construct(cfg);
  SystemSpec spec = parse_spec(system);
  if (uses_level(spec.kind)) spec.k = k;
  std::vector<Arc> arcs;
  for (const auto& p : probes) {
    const auto comma = p.find(',');
    if (comma == std::string::npos) throw Error("--probe must be 'lo,length'");
    arcs.emplace_back(CirclePoint(parse_value(p.substr(0, comma))),
                      parse_value(p.substr(comma + 1)));
  }
  const SkewSystem sys = SkewSystem(c, spec).with_probes(arcs);
  std::vector<std::int64_t> cps = parse_list(checkpoints);
  std::sort(cps.begin(), cps.end());
  if (cps.empty() || cps.front() < 1) throw Error("checkpoints must be positive");

  ojson rows = ojson::array();
  bool uncertain = false;
  for (const auto& s : starts) {
    const SkewState st = parse_state(s);
    Orbit orb = make_orbit(sys, st);
    // counts[probe][fiber value]
    std::vector<std::map<std::int64_t, std::int64_t>> counts(arcs.size());
    ojson at = ojson::array();
    std::size_t next = 0;
    orb.run(cps.back(), [&](const auto& core) {
      const std::uint32_t tags = core.tags();
      for (std::size_t p = 0; p < arcs.size(); ++p) {
        if (tags & (1u << p)) ++counts[p][core.fiber()];
      }
      while (next < cps.size() && core.time() == cps[next]) {
        ojson per = ojson::array();
        for (std::size_t p = 0; p < arcs.size(); ++p) {
          ojson f = ojson::object();
          for (const auto& [h, n] : counts[p]) {
            f[std::to_string(h)] = static_cast<double>(n) / static_cast<double>(cps[next]);
          }
          per.push_back(f);
        }
        at.push_back(ojson{{"N", cps[next]}, {"frequencies", per}});
        ++next;
      }
    });
    uncertain = uncertain || orb.uncertain();
    rows.push_back(ojson{{"start", s}, {"uncertain_steps", orb.uncertain_steps()}, {"checkpoints", at}});
  }
  ojson j;
  j["name"] = "measure";
  j["system"] = to_string(spec.kind);
  j["starts"] = rows;
  j["seed"] = o.seed;
  emit(j.dump() + "\n", o.out);
  return uncertain ? kExitNoCertificate : 0;
}

void add_common(CLI::App* app, Common& o) {
  app->add_option("--alpha", o.alpha, "field element, sqrt:<d>:<a>:<b>");
  app->add_option("--config", o.config, "construction JSON file");
  app->add_option("--preset", o.preset, "index-map preset: paper, geometric, linear");
  app->add_option("--depth", o.depth, "truncation depth K");
  app->add_option("--seed", o.seed, "seed for randomized experiments");
  app->add_option("--out", o.out, "write output here instead of stdout");
  app->add_option("--jobs", o.jobs, "worker threads for sample-parallel work")->check(CLI::PositiveNumber);
  app->add_flag("--fk-all-levels", fk_all_levels, "F_k sums the jumps of levels 1..k");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skewlab: exact experiments on skew products over circle rotations"};
  app.require_subcommand(1);
  Common common;
  std::map<std::string, std::string> args;

  auto* cf = app.add_subcommand("cf", "continued fraction and convergents");
  std::size_t cf_count = 10;
  add_common(cf, common);
  cf->add_option("--count", cf_count, "largest index");

  auto* build = app.add_subcommand("build", "construction summary as JSON");
  add_common(build, common);

  auto* orb = app.add_subcommand("orbit", "orbit as CSV");
  add_common(orb, common);
  std::string orb_system = "Tk", orb_start = "0,0";
  std::size_t orb_k = 1;
  std::int64_t orb_steps = 100, orb_stride = 1;
  bool orb_exact = false;
  orb->add_option("--system", orb_system);
  orb->add_option("--k", orb_k);
  orb->add_option("--start", orb_start, "x,h");
  orb->add_option("--steps", orb_steps, "negative runs backwards");
  orb->add_option("--stride", orb_stride);
  orb->add_flag("--exact", orb_exact, "add the lossless x column");

  auto* verify = app.add_subcommand("verify", "run one check, or all exact checks");
  add_common(verify, common);
  std::string check;
  VerifyArgs va;
  verify->add_option("check", check)
      ->required()
      ->check(CLI::IsMember({"j-first", "comparison", "small-shift", "density", "separation", "dio",
                             "occupancy", "halfstrip", "skew", "dense-orbit", "all"}));
  verify->add_option("--steps", va.steps, "N (0 = check default)");
  verify->add_option("--k", va.k);
  verify->add_option("--jmax", va.jmax);
  verify->add_option("--perturb", va.perturb);
  verify->add_flag("--swap", va.swap, "swap the roles of J and J'");
  verify->add_option("--pair", va.pair, "e.g. Tk1,Sk2");
  verify->add_option("--start", va.start, "x,h");
  verify->add_option("--n-list", va.n_list);
  verify->add_option("--C", va.C);
  verify->add_option("--threshold", va.threshold);
  verify->add_option("--system", va.system);
  verify->add_option("--probe", va.probe, "lo,length");
  verify->add_option("--sheet", va.sheet);
  verify->add_option("--checkpoints", va.checkpoints);
  verify->add_option("--delta-min", va.delta_min);
  verify->add_option("--samples", va.samples);
  verify->add_option("--early", va.early);
  verify->add_option("--min-bound", va.min_bound);
  verify->add_option("--eps", va.eps);
  verify->add_option("--r-list", va.r_list);
  verify->add_option("--n-cap", va.n_cap);

  auto* shrink = app.add_subcommand("shrink", "shrinking-target measure: exact and Monte-Carlo");
  add_common(shrink, common);
  ShrinkArgs sa;
  shrink->add_option("--targets", sa.targets);
  shrink->add_option("--samples", sa.samples);
  shrink->add_option("--rule", sa.rule, "harmonic or power");
  shrink->add_option("--scale", sa.scale);
  shrink->add_option("--power", sa.power);
  shrink->add_option("--N", sa.N);
  shrink->add_option("--M", sa.M);
  shrink->add_option("--target", sa.target, "y,sheet");
  shrink->add_flag("--exact-only", sa.exact_only);

  auto* measure = app.add_subcommand("measure", "empirical occupancy of probe arcs");
  add_common(measure, common);
  std::string m_system = "Ttrunc", m_checkpoints = "1000,10000,100000";
  std::size_t m_k = 1;
  std::vector<std::string> m_starts{"0,0", "0,1"};
  std::vector<std::string> m_probes{"3/10,3/10"};
  measure->add_option("--system", m_system);
  measure->add_option("--k", m_k);
  measure->add_option("--start", m_starts, "x,h (repeatable)");
  measure->add_option("--probe", m_probes, "lo,length (repeatable)");
  measure->add_option("--checkpoints", m_checkpoints);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  // Command-specific parameters that enter the report digest.
  auto record = [&](CLI::App* sub) {
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->count() == 0 || opt->get_name() == "--help") continue;
      const std::string n = opt->get_name();
      if (n == "--out" || n == "--jobs" || n == "--config" || n == "--alpha" ||
          n == "--preset" || n == "--depth" || n == "--seed") {
        continue;
      }
      std::string v;
      for (const auto& r : opt->results()) v += r + ",";
      args[n] = v;
    }
  };

  try {
    if (*cf) return cmd_cf(common, cf_count);
    if (*build) return cmd_build(common);
    if (*orb) return cmd_orbit(common, orb_system, orb_k, orb_start, orb_steps, orb_stride, orb_exact);
    if (*verify) {
      record(verify);
      return cmd_verify(common, check, va, args);
    }
    if (*shrink) {
      record(shrink);
      return cmd_shrink(common, sa, args);
    }
    if (*measure) return cmd_measure(common, m_system, m_k, m_starts, m_probes, m_checkpoints);
  } catch (const BudgetExceeded& e) {
    std::cerr << "skewlab: " << e.what() << "\n";
    return kExitNoCertificate;
  } catch (const Error& e) {
    std::cerr << "skewlab: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

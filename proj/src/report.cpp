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

#include "skewlab/report.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace skewlab {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

nlohmann::ordered_json to_json(const Verdict& v, const ReportContext& ctx) {
  nlohmann::ordered_json j;
  j["name"] = v.name;
  j["status"] = to_string(v.status);
  if (v.witness) {
    j["witness"] = {{"n", v.witness->n}, {"state", v.witness->state}, {"value", v.witness->value}};
  } else {
    j["witness"] = nullptr;
  }
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, x] : v.metrics) m[k] = x;
  j["metrics"] = m;
  nlohmann::ordered_json e = nlohmann::ordered_json::object();
  for (const auto& [k, x] : v.exact) e[k] = x;
  j["exact"] = e;
  j["config_digest"] = hex64(fnv1a64(ctx.config_json + "\n" + ctx.args));
  j["seed"] = ctx.seed;
  return j;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string verdict_json(const Verdict& v, const ReportContext& ctx) {
  return to_json(v, ctx).dump();
}

std::string verdicts_json(const std::string& name, const std::vector<Verdict>& vs,
                          const ReportContext& ctx) {
  const int code = exit_code(vs);
  nlohmann::ordered_json j;
  j["name"] = name;
  j["status"] = code == 0 ? "Verified" : (code == 1 ? "Violated" : "NoCertificate");
  j["verdicts"] = nlohmann::ordered_json::array();
  for (const auto& v : vs) j["verdicts"].push_back(to_json(v, ctx));
  j["config_digest"] = hex64(fnv1a64(ctx.config_json + "\n" + ctx.args));
  j["seed"] = ctx.seed;
  return j.dump();
}

int exit_code(const std::vector<Verdict>& vs) {
  bool none = false;
  for (const auto& v : vs) {
    if (v.status == Status::Violated) return 1;
    if (v.status == Status::NoCertificate) none = true;
  }
  return none ? 3 : 0;
}

}  // namespace skewlab

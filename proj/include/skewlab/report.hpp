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

#ifndef SKEWLAB_REPORT_HPP
#define SKEWLAB_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/analysis.hpp"

namespace skewlab {

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(const std::string& bytes);

struct ReportContext {
  std::string config_json;  // canonical construction config
  std::string args;         // the command's own parameters, canonical order
  std::uint64_t seed = 0;
};

/// One verdict as a JSON object (keys sorted, fixed number formatting).
std::string verdict_json(const Verdict& v, const ReportContext& ctx);
/// Several verdicts as one JSON document with an aggregate status.
std::string verdicts_json(const std::string& name, const std::vector<Verdict>& vs,
                          const ReportContext& ctx);

/// Exit code for a set of verdicts: 1 if any Violated, else 3 if any
/// NoCertificate, else 0.
int exit_code(const std::vector<Verdict>& vs);

}  // namespace skewlab

#endif  // SKEWLAB_REPORT_HPP

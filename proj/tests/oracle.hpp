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

// Independent references for the tests: 1024-bit GMP floats.

#ifndef SKEWLAB_TESTS_ORACLE_HPP
#define SKEWLAB_TESTS_ORACLE_HPP

#include <ostream>

#include <gmpxx.h>

#include "skewlab/qfield.hpp"

namespace oracle {

inline constexpr mp_bitcnt_t kBits = 1024;

inline mpf_class big(const mpq_class& q) {
  mpf_class f(0, kBits);
  f = mpf_class(q.get_num(), kBits) / mpf_class(q.get_den(), kBits);
  return f;
}

inline mpf_class value(const skewlab::QReal& x) {
  mpf_class r(0, kBits);
  mpf_class root(x.d() == 0 ? 0 : x.d(), kBits);
  mpf_sqrt(root.get_mpf_t(), root.get_mpf_t());
  r = big(x.a()) + big(x.b()) * root;
  return r;
}

inline mpf_class frac(const mpf_class& v) {
  mpf_class f(0, kBits);
  mpf_floor(f.get_mpf_t(), v.get_mpf_t());
  f = v - f;
  return f;
}

inline double to_double(const mpf_class& v) { return v.get_d(); }

}  // namespace oracle

namespace skewlab {
inline void PrintTo(const QReal& x, std::ostream* os) {
  *os << to_exact_string(x) << " (" << to_decimal(x) << ")";
}
}  // namespace skewlab

#endif  // SKEWLAB_TESTS_ORACLE_HPP

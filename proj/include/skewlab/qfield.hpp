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

#ifndef SKEWLAB_QFIELD_HPP
#define SKEWLAB_QFIELD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace skewlab {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Raised for contract violations anywhere in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Order { Less, Equal, Greater };

/// Exact element a + b*sqrt(d) of a real quadratic field.
///
/// `a` and `b` are kept in lowest terms (GMP canonical form). A value with
/// b == 0 is rational and combines with elements of any field; two irrational
/// operands must share d.
class QReal {
 public:
  QReal() = default;
  QReal(Rational a, Rational b, std::int64_t d);

  static QReal rational(Rational a);
  static QReal integer(const BigInt& n) { return rational(Rational(n)); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  std::int64_t d() const { return d_; }
  bool is_rational() const { return sgn(b_) == 0; }

  /// -1, 0 or +1.
  int sign() const;

  QReal operator-() const;
  QReal& operator+=(const QReal& rhs);
  QReal& operator-=(const QReal& rhs);
  QReal& operator*=(const QReal& rhs);
  QReal& operator/=(const QReal& rhs);

  QReal reciprocal() const;

  friend QReal operator+(QReal lhs, const QReal& rhs) { return lhs += rhs; }
  friend QReal operator-(QReal lhs, const QReal& rhs) { return lhs -= rhs; }
  friend QReal operator*(QReal lhs, const QReal& rhs) { return lhs *= rhs; }
  friend QReal operator/(QReal lhs, const QReal& rhs) { return lhs /= rhs; }

  friend bool operator==(const QReal& x, const QReal& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.is_rational() || x.d_ == y.d_);
  }

 private:
  std::int64_t field_with(const QReal& rhs) const;

  Rational a_{0};
  Rational b_{0};
  std::int64_t d_ = 0;
};

/// Builds (a_num/a_den) + (b_num/b_den)*sqrt(d). d must be square-free, >= 2.
QReal make_qreal(const BigInt& a_num, const BigInt& a_den, const BigInt& b_num,
                 const BigInt& b_den, std::int64_t d);

/// sqrt(n) for a positive integer n with its square part pulled out.
QReal qsqrt(std::int64_t n);

bool is_square_free(std::int64_t d);

Order compare(const QReal& x, const QReal& y);

inline bool operator<(const QReal& x, const QReal& y) { return compare(x, y) == Order::Less; }
inline bool operator>(const QReal& x, const QReal& y) { return compare(x, y) == Order::Greater; }
inline bool operator<=(const QReal& x, const QReal& y) { return compare(x, y) != Order::Greater; }
inline bool operator>=(const QReal& x, const QReal& y) { return compare(x, y) != Order::Less; }

QReal abs(const QReal& x);
const QReal& min(const QReal& x, const QReal& y);
const QReal& max(const QReal& x, const QReal& y);

BigInt floor_qreal(const QReal& x);
BigInt ceil_qreal(const QReal& x);

/// x - floor(x), in [0, 1).
QReal frac(const QReal& x);

/// frac(m * alpha); m may have thousands of digits.
QReal frac_multiple(const QReal& alpha, const BigInt& m);

struct ContinuedFraction {
  std::vector<BigInt> terms;  // a_0, a_1, ...
  bool rational = false;      // expansion terminated
  // Complete quotients repeat from period_start with this length; 0 when no
  // repetition was seen among the computed terms.
  std::size_t period_start = 0;
  std::size_t period_length = 0;

  /// a_i for any i, extending periodically past the computed terms.
  const BigInt& term(std::size_t i) const;
};

/// Partial quotients a_0..a_count by exact floor/reciprocal.
ContinuedFraction continued_fraction(const QReal& x, std::size_t count);

struct Convergent {
  std::size_t index = 0;
  BigInt p;
  BigInt q;
};

std::vector<Convergent> convergents(const QReal& x, std::size_t max_index);
std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t max_index);

/// min over k <= depth of q_k * |q_k alpha - p_k|.
QReal badly_approximable_constant(const QReal& alpha, std::size_t depth);

/// Decimal string with `significant` significant digits (round half up),
/// exponent notation outside [1e-5, 1e18).
std::string to_decimal(const QReal& x, int significant = 18);

/// Nearest double, for reporting only.
double to_double(const QReal& x);

/// "a_num/a_den:b_num/b_den:d" (lossless).
std::string to_exact_string(const QReal& x);

}  // namespace skewlab

#endif  // SKEWLAB_QFIELD_HPP

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

#include "skewlab/qfield.hpp"

#include <map>
#include <utility>

namespace skewlab {

namespace {

BigInt lcm_of(const BigInt& x, const BigInt& y) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return r;
}

BigInt pow10(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

BigInt floor_sqrt(const BigInt& n) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

// Sign of a + b*sqrt(d): same-sign coefficients decide at once, otherwise the
// larger of a^2 and b^2*d wins. No rounding anywhere.
int quadratic_sign(const Rational& a, const Rational& b, std::int64_t d) {
  const int sa = sgn(a);
  const int sb = sgn(b);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  const Rational a2 = a * a;
  const Rational b2d = b * b * Rational(BigInt(static_cast<long>(d)));
  return a2 > b2d ? sa : sb;
}

}  // namespace

bool is_square_free(std::int64_t d) {
  if (d < 2) return false;
  for (std::int64_t p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

QReal::QReal(Rational a, Rational b, std::int64_t d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  a_.canonicalize();
  b_.canonicalize();
  if (sgn(b_) == 0 && d_ == 0) return;
  // Trial division is slow for large d; remember the last field seen.
  thread_local std::int64_t last_checked = 0;
  if (d_ == last_checked) return;
  if (!is_square_free(d_)) {
    throw Error("quadratic field parameter must be square-free and >= 2, got " +
                std::to_string(d_));
  }
  last_checked = d_;
}

QReal QReal::rational(Rational a) {
  QReal r;
  r.a_ = std::move(a);
  r.a_.canonicalize();
  return r;
}

std::int64_t QReal::field_with(const QReal& rhs) const {
  if (is_rational() && d_ == 0) return rhs.d_;
  if (rhs.is_rational() && rhs.d_ == 0) return d_;
  if (is_rational()) return rhs.d_ != 0 ? rhs.d_ : d_;
  if (rhs.is_rational()) return d_;
  if (d_ != rhs.d_) {
    throw Error("mixed quadratic fields: sqrt(" + std::to_string(d_) + ") and sqrt(" +
                std::to_string(rhs.d_) + ")");
  }
  return d_;
}

int QReal::sign() const { return quadratic_sign(a_, b_, d_); }

QReal QReal::operator-() const {
  QReal r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

QReal& QReal::operator+=(const QReal& rhs) {
  d_ = field_with(rhs);
  a_ += rhs.a_;
  b_ += rhs.b_;
  return *this;
}

QReal& QReal::operator-=(const QReal& rhs) {
  d_ = field_with(rhs);
  a_ -= rhs.a_;
  b_ -= rhs.b_;
  return *this;
}

QReal& QReal::operator*=(const QReal& rhs) {
  const std::int64_t d = field_with(rhs);
  const Rational dd(BigInt(static_cast<long>(d)));
  Rational na = a_ * rhs.a_ + b_ * rhs.b_ * dd;
  Rational nb = a_ * rhs.b_ + b_ * rhs.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  d_ = d;
  return *this;
}

QReal QReal::reciprocal() const {
  if (sign() == 0) throw Error("reciprocal of zero");
  // 1/(a + b r) = (a - b r) / (a^2 - b^2 d)
  const Rational dd(BigInt(static_cast<long>(d_)));
  const Rational norm = a_ * a_ - b_ * b_ * dd;
  QReal r;
  r.a_ = a_ / norm;
  r.b_ = -b_ / norm;
  r.d_ = d_;
  return r;
}

QReal& QReal::operator/=(const QReal& rhs) { return *this *= rhs.reciprocal(); }

QReal make_qreal(const BigInt& a_num, const BigInt& a_den, const BigInt& b_num,
                 const BigInt& b_den, std::int64_t d) {
  if (a_den == 0 || b_den == 0) throw Error("zero denominator");
  if (!is_square_free(d)) {
    throw Error("quadratic field parameter must be square-free and >= 2, got " +
                std::to_string(d));
  }
  return QReal(Rational(a_num, a_den), Rational(b_num, b_den), d);
}

QReal qsqrt(std::int64_t n) {
  if (n <= 0) throw Error("qsqrt needs a positive integer");
  std::int64_t square = 1;
  std::int64_t rest = n;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    while (rest % (p * p) == 0) {
      rest /= p * p;
      square *= p;
    }
  }
  if (rest == 1) return QReal::integer(BigInt(static_cast<long>(square)));
  return QReal(Rational(0), Rational(BigInt(static_cast<long>(square))), rest);
}

Order compare(const QReal& x, const QReal& y) {
  const QReal diff = x - y;
  const int s = diff.sign();
  return s < 0 ? Order::Less : (s > 0 ? Order::Greater : Order::Equal);
}

QReal abs(const QReal& x) { return x.sign() < 0 ? -x : x; }
const QReal& min(const QReal& x, const QReal& y) { return y < x ? y : x; }
const QReal& max(const QReal& x, const QReal& y) { return x < y ? y : x; }

BigInt floor_qreal(const QReal& x) {
  BigInt out;
  if (x.is_rational()) {
    mpz_fdiv_q(out.get_mpz_t(), x.a().get_num_mpz_t(), x.a().get_den_mpz_t());
    return out;
  }
  // x = (A + B sqrt d) / L with L > 0. B sqrt d is irrational, so it lies
  // strictly between t and t + 1 and floor(x) = floor((A + t) / L).
  const BigInt L = lcm_of(x.a().get_den(), x.b().get_den());
  const BigInt A = x.a().get_num() * (L / x.a().get_den());
  const BigInt B = x.b().get_num() * (L / x.b().get_den());
  const BigInt root = floor_sqrt(B * B * BigInt(static_cast<long>(x.d())));
  const BigInt t = B > 0 ? root : BigInt(-root - 1);
  const BigInt num = A + t;
  mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), L.get_mpz_t());
  return out;
}

BigInt ceil_qreal(const QReal& x) { return -floor_qreal(-x); }

QReal frac(const QReal& x) { return x - QReal::integer(floor_qreal(x)); }

QReal frac_multiple(const QReal& alpha, const BigInt& m) {
  return frac(alpha * QReal::integer(m));
}

const BigInt& ContinuedFraction::term(std::size_t i) const {
  if (i < terms.size()) return terms[i];
  if (period_length == 0) throw Error("continued fraction term beyond computed range");
  return terms[period_start + (i - period_start) % period_length];
}

ContinuedFraction continued_fraction(const QReal& x, std::size_t count) {
  ContinuedFraction cf;
  std::map<std::pair<Rational, Rational>, std::size_t> seen;
  QReal current = x;
  for (std::size_t k = 0; k <= count; ++k) {
    if (!x.is_rational()) {
      auto key = std::make_pair(current.a(), current.b());
      auto [it, inserted] = seen.emplace(std::move(key), k);
      if (!inserted) {
        cf.period_start = it->second;
        cf.period_length = k - it->second;
        break;
      }
    }
    BigInt a = floor_qreal(current);
    current -= QReal::integer(a);
    cf.terms.push_back(std::move(a));
    if (current.sign() == 0) {
      cf.rational = true;
      break;
    }
    current = current.reciprocal();
  }
  if (cf.period_length > 0) {
    cf.terms.reserve(count + 1);
    while (cf.terms.size() <= count) cf.terms.push_back(cf.term(cf.terms.size()));
  }
  return cf;
}

std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t max_index) {
  std::vector<Convergent> out;
  out.reserve(max_index + 1);
  BigInt p_prev2 = 0, p_prev = 1, q_prev2 = 1, q_prev = 0;
  for (std::size_t i = 0; i <= max_index; ++i) {
    if (cf.rational && i >= cf.terms.size()) break;
    const BigInt& a = cf.term(i);
    BigInt p = a * p_prev + p_prev2;
    BigInt q = a * q_prev + q_prev2;
    p_prev2 = std::move(p_prev);
    q_prev2 = std::move(q_prev);
    p_prev = p;
    q_prev = q;
    out.push_back(Convergent{i, std::move(p), std::move(q)});
  }
  return out;
}

std::vector<Convergent> convergents(const QReal& x, std::size_t max_index) {
  if (x.is_rational()) throw Error("convergents need an irrational number");
  return convergents(continued_fraction(x, max_index), max_index);
}

QReal badly_approximable_constant(const QReal& alpha, std::size_t depth) {
  const auto conv = convergents(alpha, depth);
  QReal best;
  bool first = true;
  for (const auto& c : conv) {
    const QReal qi = QReal::integer(c.q);
    const QReal value = qi * abs(qi * alpha - QReal::integer(c.p));
    if (first || value < best) best = value;
    first = false;
  }
  return best;
}

std::string to_decimal(const QReal& x, int significant) {
  if (significant < 1) throw Error("significant digits must be positive");
  if (x.sign() == 0) return "0";
  const bool negative = x.sign() < 0;
  const QReal v = abs(x);

  // N = floor(v * 10^s) with at least significant + 1 digits.
  long s = significant + 1;
  BigInt scaled = floor_qreal(v * QReal::integer(pow10(static_cast<unsigned long>(s))));
  while (scaled < pow10(static_cast<unsigned long>(significant))) {
    s += significant + 1;
    scaled = floor_qreal(v * QReal::integer(pow10(static_cast<unsigned long>(s))));
  }
  const std::string all = scaled.get_str();
  const long n = static_cast<long>(all.size());
  long exponent = n - 1 - s;
  const long drop = n - significant;
  BigInt kept(all.substr(0, static_cast<std::size_t>(significant)), 10);
  const BigInt rest(all.substr(static_cast<std::size_t>(significant)), 10);
  if (drop > 0 && rest >= 5 * pow10(static_cast<unsigned long>(drop - 1))) kept += 1;
  std::string mant = kept.get_str();
  if (static_cast<long>(mant.size()) > significant) {
    mant.pop_back();
    ++exponent;
  }
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();

  std::string out = negative ? "-" : "";
  if (exponent >= -5 && exponent < 18) {
    if (exponent >= 0) {
      std::string int_part = mant.substr(0, std::min<std::size_t>(mant.size(), exponent + 1));
      while (static_cast<long>(int_part.size()) < exponent + 1) int_part.push_back('0');
      out += int_part;
      if (static_cast<long>(mant.size()) > exponent + 1) out += "." + mant.substr(exponent + 1);
    } else {
      out += "0." + std::string(static_cast<std::size_t>(-exponent - 1), '0') + mant;
    }
  } else {
    out += mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    out += (exponent < 0 ? "e-" : "e+") + std::to_string(exponent < 0 ? -exponent : exponent);
  }
  return out;
}

double to_double(const QReal& x) {
  const mp_bitcnt_t prec = 256;
  mpf_class a(x.a(), prec);
  mpf_class b(x.b(), prec);
  mpf_class r(0, prec);
  if (!x.is_rational()) {
    mpf_class dd(static_cast<double>(x.d()), prec);
    r = sqrt(dd);
  }
  mpf_class v = a + b * r;
  return v.get_d();
}

std::string to_exact_string(const QReal& x) {
  return x.a().get_str() + ":" + x.b().get_str() + ":" + std::to_string(x.d());
}

}  // namespace skewlab

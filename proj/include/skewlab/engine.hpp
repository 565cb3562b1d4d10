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

// Exact orbit iteration of a skew product x -> x + alpha, h -> h + f(x) where
// f is piecewise constant on the circle with cuts in Q(sqrt d).
//
// All points of one orbit share a denominator L, so a point is the integer
// pair (p, q) standing for (p + q sqrt d) / L. Orders are decided by the sign
// of p + q sqrt d (same-sign test, then p^2 against d q^2). Coefficients are
// held in int64 with 128-bit squares while they stay under a proven bound,
// and the orbit moves itself to GMP integers the moment they do not.

#ifndef SKEWLAB_ENGINE_HPP
#define SKEWLAB_ENGINE_HPP

#include <cstdint>
#include <memory>
#include <type_traits>
#include <variant>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/qfield.hpp"

namespace skewlab {

struct Piece {
  std::int64_t jump = 0;
  bool uncertain = false;  // membership undecided here; jump is the Out branch
  std::uint32_t tags = 0;  // probe bits, free for callers
};

/// Right-continuous step function on [0, 1): value pieces[i] on
/// [cuts[i], cuts[i+1]). cuts[0] == 0, strictly increasing, all < 1.
class PiecewiseFunction {
 public:
  PiecewiseFunction();
  PiecewiseFunction(std::vector<QReal> cuts, std::vector<Piece> pieces);

  const std::vector<QReal>& cuts() const { return cuts_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  std::size_t locate(const QReal& x) const;
  const Piece& at(const QReal& x) const { return pieces_[locate(x)]; }

 private:
  std::vector<QReal> cuts_;
  std::vector<Piece> pieces_;
};

/// One summand of a skewing function: weight * indicator(arc). Uncertain
/// terms carry weight 0 and only raise the flag.
struct Term {
  Arc arc;
  std::int64_t weight = 0;
  bool uncertain = false;
  std::uint32_t tags = 0;
};

/// Sum of the terms as a step function (cuts at every arc endpoint).
PiecewiseFunction compile_terms(const std::vector<Term>& terms);

enum class FiberGroup { Z2, Z };

namespace detail {

template <class Int>
struct Scaled {
  Int p;
  Int q;
  friend bool operator==(const Scaled&, const Scaled&) = default;
};

inline int sign_of(std::int64_t p, std::int64_t q, std::int64_t d) {
  if (q == 0) return (p > 0) - (p < 0);
  if (p == 0 || (p > 0) == (q > 0)) return q > 0 ? 1 : -1;
  const __int128 pp = static_cast<__int128>(p) * p;
  const __int128 qq = static_cast<__int128>(q) * q * d;
  if (pp > qq) return p > 0 ? 1 : -1;
  return q > 0 ? 1 : -1;
}

template <class Int>
class Arith;

template <>
class Arith<std::int64_t> {
 public:
  using Point = Scaled<std::int64_t>;

  explicit Arith(std::int64_t d);

  int compare(const Point& x, const Point& y) const { return sign_of(x.p - y.p, x.q - y.q, d_); }
  void add(Point& x, const Point& y) const {
    x.p += y.p;
    x.q += y.q;
  }
  void sub(Point& x, const Point& y) const {
    x.p -= y.p;
    x.q -= y.q;
  }
  bool fits(const Point& x) const {
    return x.p <= limit_ && x.p >= -limit_ && x.q <= limit_ && x.q >= -limit_;
  }
  bool load(const BigInt& v, std::int64_t& out) const;
  static BigInt big(std::int64_t v) { return BigInt(static_cast<long>(v)); }
  std::int64_t d() const { return d_; }

 private:
  std::int64_t d_;
  std::int64_t limit_;
};

template <>
class Arith<BigInt> {
 public:
  using Point = Scaled<BigInt>;

  explicit Arith(std::int64_t d) : d_(static_cast<long>(d)), d64_(d) {}
  Arith(const Arith& o) : d_(o.d_), d64_(o.d64_) {}
  Arith& operator=(const Arith& o) {
    d_ = o.d_;
    d64_ = o.d64_;
    return *this;
  }

  int compare(const Point& x, const Point& y) const;
  void add(Point& x, const Point& y) const {
    mpz_add(x.p.get_mpz_t(), x.p.get_mpz_t(), y.p.get_mpz_t());
    mpz_add(x.q.get_mpz_t(), x.q.get_mpz_t(), y.q.get_mpz_t());
  }
  void sub(Point& x, const Point& y) const {
    mpz_sub(x.p.get_mpz_t(), x.p.get_mpz_t(), y.p.get_mpz_t());
    mpz_sub(x.q.get_mpz_t(), x.q.get_mpz_t(), y.q.get_mpz_t());
  }
  bool fits(const Point&) const { return true; }
  bool load(const BigInt& v, BigInt& out) const {
    out = v;
    return true;
  }
  static const BigInt& big(const BigInt& v) { return v; }
  std::int64_t d() const { return d64_; }

 private:
  BigInt d_;
  std::int64_t d64_;
  mutable BigInt t1_, t2_, t3_, t4_;
};

/// Orbit state and stepping over one integer type.
template <class Int>
class OrbitCore {
 public:
  using Point = Scaled<Int>;

  struct Segment {
    std::uint32_t piece;
    bool wrap_forward;   // left end >= 1 - alpha
    bool wrap_backward;  // left end < alpha
  };

  /// Returns false when some coefficient does not fit Int.
  bool init(const BigInt& denom, std::int64_t d, const QReal& alpha,
            const PiecewiseFunction& f, const QReal& x0);

  template <class Other>
  void init_from(const OrbitCore<Other>& o);

  /// Moves to x0 at time 0; false if x0 needs a larger denominator.
  bool reset(const QReal& x0, std::int64_t fiber, bool uncertain);

  /// (p + q sqrt d) / L in long double, for filtering only.
  long double approx() const;

  bool forward() {
    const Segment& s = segs_[seg_];
    const Piece& pc = (*pieces_)[s.piece];
    if constexpr (std::is_same_v<Int, std::int64_t>) {
      Point nx = x_;
      ar_.add(nx, s.wrap_forward ? step_wrap_ : step_);
      if (!ar_.fits(nx)) return false;
      x_ = nx;
    } else {
      ar_.add(x_, s.wrap_forward ? step_wrap_ : step_);
    }
    apply(pc, +1);
    ++time_;
    seg_ = locate(x_);
    return true;
  }

  bool backward() {
    const Segment& s = segs_[seg_];
    if constexpr (std::is_same_v<Int, std::int64_t>) {
      Point nx = x_;
      ar_.sub(nx, s.wrap_backward ? step_wrap_ : step_);
      if (!ar_.fits(nx)) return false;
      x_ = nx;
    } else {
      ar_.sub(x_, s.wrap_backward ? step_wrap_ : step_);
    }
    seg_ = locate(x_);
    apply((*pieces_)[segs_[seg_].piece], -1);
    --time_;
    return true;
  }

  std::size_t locate(const Point& x) const {
    std::size_t lo = 0;
    std::size_t hi = cuts_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (ar_.compare(x, cuts_[mid]) >= 0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }

  std::int64_t time() const { return time_; }
  std::int64_t fiber() const { return fiber_; }
  bool uncertain() const { return uncertain_; }
  std::int64_t uncertain_steps() const { return uncertain_steps_; }
  std::size_t piece_index() const { return segs_[seg_].piece; }
  const Piece& piece() const { return (*pieces_)[segs_[seg_].piece]; }
  std::uint32_t tags() const { return piece().tags; }
  QReal x() const;
  const Point& point() const { return x_; }
  const Int& denominator() const { return denom_; }

  void set_fiber(std::int64_t h, bool uncertain, std::int64_t modulus) {
    modulus_ = modulus;
    fiber_ = h;
    uncertain_ = uncertain;
  }

 private:
  template <class>
  friend class OrbitCore;

  void apply(const Piece& pc, int direction) {
    if (pc.uncertain) {
      uncertain_ = true;
      ++uncertain_steps_;
    }
    fiber_ += direction * pc.jump;
    if (modulus_ == 2) fiber_ &= 1;
  }

  Arith<Int> ar_{2};
  Int denom_{};
  std::vector<Point> cuts_;
  std::vector<Segment> segs_;
  std::shared_ptr<const std::vector<Piece>> pieces_;
  Point step_{};       // +alpha
  Point step_wrap_{};  // +alpha - 1
  Point x_{};
  std::size_t seg_ = 0;
  std::int64_t time_ = 0;
  std::int64_t fiber_ = 0;
  std::int64_t modulus_ = 0;
  bool uncertain_ = false;
  std::int64_t uncertain_steps_ = 0;
};

}  // namespace detail

/// Exact orbit of (x0, h0) under (x, h) -> (x + alpha mod 1, h + f(x)).
///
/// `run(n, observer)` steps |n| times (backwards when n < 0) and calls
/// observer(core) after each step, where core exposes time(), fiber(),
/// uncertain(), piece(), tags() and x(). An observer returning bool stops the
/// run on false.
class Orbit {
 public:
  Orbit(const QReal& alpha, const PiecewiseFunction& f, const QReal& x0, FiberGroup group,
        std::int64_t fiber0 = 0, bool uncertain0 = false);

  void forward() {
    run(1, [](const auto&) {});
  }
  void backward() {
    run(-1, [](const auto&) {});
  }

  template <class F>
  std::int64_t run(std::int64_t steps, F&& observer);

  QReal x() const;
  std::int64_t time() const;
  std::int64_t fiber() const;
  bool uncertain() const;
  std::int64_t uncertain_steps() const;
  const Piece& piece() const;
  std::size_t piece_index() const;
  bool exact_in_machine_words() const { return core_.index() == 0; }

  /// Restarts at (x0, fiber0) reusing the compiled function. x0's
  /// denominators must divide the orbit's common denominator.
  void reset(const QReal& x0, std::int64_t fiber0, bool uncertain0 = false);

 private:
  void promote();

  std::variant<detail::OrbitCore<std::int64_t>, detail::OrbitCore<BigInt>> core_;
};

template <class F>
std::int64_t Orbit::run(std::int64_t steps, F&& observer) {
  const bool ahead = steps >= 0;
  std::int64_t remaining = ahead ? steps : -steps;
  std::int64_t done = 0;
  while (remaining > 0) {
    bool stop = false;
    bool overflow = false;
    std::visit(
        [&](auto& core) {
          while (remaining > 0) {
            if (!(ahead ? core.forward() : core.backward())) {
              overflow = true;
              return;
            }
            --remaining;
            ++done;
            using R = decltype(observer(core));
            if constexpr (std::is_same_v<R, bool>) {
              if (!observer(core)) {
                stop = true;
                return;
              }
            } else {
              observer(core);
            }
          }
        },
        core_);
    if (stop) break;
    if (overflow) promote();
  }
  return done;
}

/// lcm of the denominators of every coefficient involved.
BigInt common_denominator(const QReal& alpha, const std::vector<QReal>& values);

}  // namespace skewlab

#endif  // SKEWLAB_ENGINE_HPP

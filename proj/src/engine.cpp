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

#include "skewlab/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace skewlab {

namespace {

const QReal kOne = QReal::integer(1);

// floor(sqrt(n)) for n < 2^126.
std::int64_t isqrt128(unsigned __int128 n) {
  BigInt big;
  mpz_import(big.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0,
             std::array<std::uint64_t, 2>{static_cast<std::uint64_t>(n),
                                          static_cast<std::uint64_t>(n >> 64)}
                 .data());
  mpz_sqrt(big.get_mpz_t(), big.get_mpz_t());
  return static_cast<std::int64_t>(big.get_si());
}

}  // namespace

PiecewiseFunction::PiecewiseFunction() : cuts_{QReal()}, pieces_{Piece{}} {}

PiecewiseFunction::PiecewiseFunction(std::vector<QReal> cuts, std::vector<Piece> pieces)
    : cuts_(std::move(cuts)), pieces_(std::move(pieces)) {
  if (cuts_.empty() || cuts_.size() != pieces_.size()) {
    throw Error("piecewise function needs one piece per cut");
  }
  if (cuts_.front().sign() != 0) throw Error("first cut must be 0");
  for (std::size_t i = 1; i < cuts_.size(); ++i) {
    if (!(cuts_[i - 1] < cuts_[i])) throw Error("cuts must increase strictly");
  }
  if (cuts_.back() >= kOne) throw Error("cuts must lie in [0, 1)");
}

std::size_t PiecewiseFunction::locate(const QReal& x) const {
  auto it = std::upper_bound(cuts_.begin(), cuts_.end(), x,
                             [](const QReal& v, const QReal& c) { return v < c; });
  if (it == cuts_.begin()) throw Error("point below 0");
  return static_cast<std::size_t>(it - cuts_.begin()) - 1;
}

PiecewiseFunction compile_terms(const std::vector<Term>& terms) {
  std::vector<QReal> cuts{QReal()};
  for (const auto& t : terms) {
    if (t.arc.is_empty() || t.arc.is_full()) continue;
    cuts.push_back(t.arc.lo().value());
    cuts.push_back(frac(t.arc.end()));
  }
  std::sort(cuts.begin(), cuts.end(), [](const QReal& u, const QReal& v) { return u < v; });
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Piece> pieces;
  pieces.reserve(cuts.size());
  for (const auto& c : cuts) {
    Piece pc;
    const CirclePoint at(c);
    for (const auto& t : terms) {
      if (!arc_contains(t.arc, at)) continue;
      pc.jump += t.weight;
      pc.uncertain = pc.uncertain || t.uncertain;
      pc.tags |= t.tags;
    }
    pieces.push_back(pc);
  }
  return PiecewiseFunction(std::move(cuts), std::move(pieces));
}

namespace detail {

Arith<std::int64_t>::Arith(std::int64_t d) : d_(d) {
  // Differences of two admissible points stay below 2^62 and their squares
  // (times d) below 2^126.
  const unsigned __int128 cap = (static_cast<unsigned __int128>(1) << 124) /
                                static_cast<unsigned __int128>(d < 1 ? 1 : d);
  limit_ = std::min<std::int64_t>(isqrt128(cap), std::int64_t{1} << 61);
}

bool Arith<std::int64_t>::load(const BigInt& v, std::int64_t& out) const {
  if (!v.fits_slong_p()) return false;
  out = v.get_si();
  return out <= limit_ && out >= -limit_;
}

int Arith<BigInt>::compare(const Point& x, const Point& y) const {
  mpz_sub(t1_.get_mpz_t(), x.p.get_mpz_t(), y.p.get_mpz_t());
  mpz_sub(t2_.get_mpz_t(), x.q.get_mpz_t(), y.q.get_mpz_t());
  const int sp = mpz_sgn(t1_.get_mpz_t());
  const int sq = mpz_sgn(t2_.get_mpz_t());
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  mpz_mul(t3_.get_mpz_t(), t1_.get_mpz_t(), t1_.get_mpz_t());
  mpz_mul(t4_.get_mpz_t(), t2_.get_mpz_t(), t2_.get_mpz_t());
  mpz_mul(t4_.get_mpz_t(), t4_.get_mpz_t(), d_.get_mpz_t());
  return mpz_cmp(t3_.get_mpz_t(), t4_.get_mpz_t()) > 0 ? sp : sq;
}

namespace {

template <class Int>
bool scale(const Arith<Int>& ar, const BigInt& denom, std::int64_t d, const QReal& v,
           Scaled<Int>& out) {
  if (!v.is_rational() && v.d() != d) throw Error("value from a different quadratic field");
  const Rational a = v.a() * Rational(denom);
  const Rational b = v.b() * Rational(denom);
  if (a.get_den() != 1 || b.get_den() != 1) throw Error("denominator does not cover value");
  return ar.load(a.get_num(), out.p) && ar.load(b.get_num(), out.q);
}

}  // namespace

template <class Int>
bool OrbitCore<Int>::init(const BigInt& denom, std::int64_t d, const QReal& alpha,
                          const PiecewiseFunction& f, const QReal& x0) {
  ar_ = Arith<Int>(d);
  if (!ar_.load(denom, denom_)) return false;

  const QReal back_cut = alpha;
  const QReal fwd_cut = kOne - alpha;
  std::vector<QReal> all = f.cuts();
  all.push_back(back_cut);
  all.push_back(fwd_cut);
  std::sort(all.begin(), all.end(), [](const QReal& u, const QReal& v) { return u < v; });
  all.erase(std::unique(all.begin(), all.end()), all.end());

  cuts_.assign(all.size(), Point{});
  segs_.clear();
  segs_.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!scale(ar_, denom, d, all[i], cuts_[i])) return false;
    segs_.push_back(Segment{static_cast<std::uint32_t>(f.locate(all[i])), all[i] >= fwd_cut,
                            all[i] < back_cut});
  }
  pieces_ = std::make_shared<const std::vector<Piece>>(f.pieces());
  if (!scale(ar_, denom, d, alpha, step_)) return false;
  if (!scale(ar_, denom, d, alpha - kOne, step_wrap_)) return false;
  if (!scale(ar_, denom, d, frac(x0), x_)) return false;
  seg_ = locate(x_);
  time_ = 0;
  uncertain_steps_ = 0;
  return true;
}

template <class Int>
template <class Other>
void OrbitCore<Int>::init_from(const OrbitCore<Other>& o) {
  ar_ = Arith<Int>(o.ar_.d());
  auto conv = [&](const Scaled<Other>& s) {
    Point out{};
    ar_.load(BigInt(Arith<Other>::big(s.p)), out.p);
    ar_.load(BigInt(Arith<Other>::big(s.q)), out.q);
    return out;
  };
  ar_.load(BigInt(Arith<Other>::big(o.denom_)), denom_);
  cuts_.clear();
  for (const auto& c : o.cuts_) cuts_.push_back(conv(c));
  segs_.clear();
  for (const auto& s : o.segs_) segs_.push_back(Segment{s.piece, s.wrap_forward, s.wrap_backward});
  pieces_ = o.pieces_;
  step_ = conv(o.step_);
  step_wrap_ = conv(o.step_wrap_);
  x_ = conv(o.x_);
  seg_ = o.seg_;
  time_ = o.time_;
  fiber_ = o.fiber_;
  modulus_ = o.modulus_;
  uncertain_ = o.uncertain_;
  uncertain_steps_ = o.uncertain_steps_;
}

template <class Int>
bool OrbitCore<Int>::reset(const QReal& x0, std::int64_t fiber, bool uncertain) {
  Point nx{};
  if (!scale(ar_, BigInt(Arith<Int>::big(denom_)), ar_.d(), frac(x0), nx)) return false;
  x_ = nx;
  seg_ = locate(x_);
  time_ = 0;
  uncertain_steps_ = 0;
  fiber_ = modulus_ == 2 ? (fiber & 1) : fiber;
  uncertain_ = uncertain;
  return true;
}

template <class Int>
long double OrbitCore<Int>::approx() const {
  const long double root = std::sqrt(static_cast<long double>(ar_.d()));
  if constexpr (std::is_same_v<Int, std::int64_t>) {
    return (static_cast<long double>(x_.p) + static_cast<long double>(x_.q) * root) /
           static_cast<long double>(denom_);
  } else {
    return (x_.p.get_d() + x_.q.get_d() * root) / denom_.get_d();
  }
}

template <class Int>
QReal OrbitCore<Int>::x() const {
  const BigInt den(Arith<Int>::big(denom_));
  return QReal(Rational(BigInt(Arith<Int>::big(x_.p)), den),
               Rational(BigInt(Arith<Int>::big(x_.q)), den), ar_.d());
}

template class OrbitCore<std::int64_t>;
template class OrbitCore<BigInt>;
template void OrbitCore<BigInt>::init_from(const OrbitCore<std::int64_t>&);

}  // namespace detail

BigInt common_denominator(const QReal& alpha, const std::vector<QReal>& values) {
  BigInt l = 1;
  auto absorb = [&](const QReal& v) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.a().get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.b().get_den_mpz_t());
  };
  absorb(alpha);
  for (const auto& v : values) absorb(v);
  return l;
}

Orbit::Orbit(const QReal& alpha, const PiecewiseFunction& f, const QReal& x0, FiberGroup group,
             std::int64_t fiber0, bool uncertain0) {
  if (alpha.is_rational()) throw Error("rotation number must be irrational");
  if (alpha.sign() <= 0 || alpha >= kOne) throw Error("rotation number must lie in (0, 1)");
  std::vector<QReal> values = f.cuts();
  values.push_back(x0);
  const BigInt denom = common_denominator(alpha, values);
  const std::int64_t d = alpha.d();
  const std::int64_t modulus = group == FiberGroup::Z2 ? 2 : 0;
  if (modulus == 2) fiber0 &= 1;

  detail::OrbitCore<std::int64_t> fast;
  if (fast.init(denom, d, alpha, f, x0)) {
    fast.set_fiber(fiber0, uncertain0, modulus);
    core_ = std::move(fast);
    return;
  }
  detail::OrbitCore<BigInt> slow;
  slow.init(denom, d, alpha, f, x0);
  slow.set_fiber(fiber0, uncertain0, modulus);
  core_ = std::move(slow);
}

void Orbit::reset(const QReal& x0, std::int64_t fiber0, bool uncertain0) {
  const bool ok = std::visit([&](auto& c) { return c.reset(x0, fiber0, uncertain0); }, core_);
  if (ok) return;
  if (core_.index() == 0) {
    promote();
    if (std::get<1>(core_).reset(x0, fiber0, uncertain0)) return;
  }
  throw Error("reset point needs a denominator the orbit does not carry");
}

void Orbit::promote() {
  if (core_.index() != 0) throw Error("orbit overflow outside the machine-word path");
  detail::OrbitCore<BigInt> slow;
  slow.init_from(std::get<0>(core_));
  core_ = std::move(slow);
}

QReal Orbit::x() const {
  return std::visit([](const auto& c) { return c.x(); }, core_);
}
std::int64_t Orbit::time() const {
  return std::visit([](const auto& c) { return c.time(); }, core_);
}
std::int64_t Orbit::fiber() const {
  return std::visit([](const auto& c) { return c.fiber(); }, core_);
}
bool Orbit::uncertain() const {
  return std::visit([](const auto& c) { return c.uncertain(); }, core_);
}
std::int64_t Orbit::uncertain_steps() const {
  return std::visit([](const auto& c) { return c.uncertain_steps(); }, core_);
}
const Piece& Orbit::piece() const {
  return std::visit([](const auto& c) -> const Piece& { return c.piece(); }, core_);
}
std::size_t Orbit::piece_index() const {
  return std::visit([](const auto& c) { return c.piece_index(); }, core_);
}

}  // namespace skewlab

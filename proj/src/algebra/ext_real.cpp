// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/algebra/ext_real.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

namespace probcert::algebra {

namespace {

constexpr long kMaxExactExponent = 4096;
constexpr long kMaxExactHarmonic = 10000;

[[noreturn]] void undefined(const std::string& what) {
  throw EvalError(EvalError::Kind::UndefinedArithmetic, "undefined arithmetic: " + what);
}

}  // namespace

ExtReal ExtReal::approx(double v) {
  if (std::isnan(v)) undefined("NaN");
  if (std::isinf(v)) {
    if (v < 0) undefined("negative infinity");
    return infinity();
  }
  return ExtReal(Kind::Approx, v);
}

ExtReal ExtReal::infinity() { return ExtReal(Kind::Infinite, 0.0); }

double ExtReal::to_double() const {
  switch (kind_) {
    case Kind::Exact:
      return q_.get_d();
    case Kind::Approx:
      return d_;
    case Kind::Infinite:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

int ExtReal::sign() const {
  switch (kind_) {
    case Kind::Exact:
      return sgn(q_);
    case Kind::Approx:
      return (d_ > 0) - (d_ < 0);
    case Kind::Infinite:
      return 1;
  }
  return 0;
}

bool ExtReal::is_integer() const {
  switch (kind_) {
    case Kind::Exact:
      return q_.get_den() == 1;
    case Kind::Approx:
      return std::floor(d_) == d_;
    case Kind::Infinite:
      return false;
  }
  return false;
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  if (a.is_infinite() || b.is_infinite()) return ExtReal::infinity();
  if (a.is_exact() && b.is_exact()) return ExtReal(Rational(a.q_ + b.q_));
  return ExtReal::approx(a.to_double() + b.to_double());
}

ExtReal operator-(const ExtReal& a, const ExtReal& b) {
  if (b.is_infinite()) undefined(a.is_infinite() ? "inf - inf" : "finite - inf");
  if (a.is_infinite()) return a;
  if (a.is_exact() && b.is_exact()) return ExtReal(Rational(a.q_ - b.q_));
  return ExtReal::approx(a.to_double() - b.to_double());
}

ExtReal operator*(const ExtReal& a, const ExtReal& b) {
  if (a.is_zero() || b.is_zero()) return ExtReal(0);
  if (a.is_infinite() || b.is_infinite()) {
    if (a.sign() < 0 || b.sign() < 0) undefined("negative * inf");
    return ExtReal::infinity();
  }
  if (a.is_exact() && b.is_exact()) return ExtReal(Rational(a.q_ * b.q_));
  return ExtReal::approx(a.to_double() * b.to_double());
}

ExtReal operator/(const ExtReal& a, const ExtReal& b) {
  if (b.is_zero()) undefined("division by zero");
  if (b.is_infinite()) {
    if (a.is_infinite()) undefined("inf / inf");
    return ExtReal(0);
  }
  if (a.is_infinite()) {
    if (b.sign() < 0) undefined("inf / negative");
    return a;
  }
  if (a.is_exact() && b.is_exact()) return ExtReal(Rational(a.q_ / b.q_));
  return ExtReal::approx(a.to_double() / b.to_double());
}

ExtReal ExtReal::operator-() const {
  if (is_infinite()) undefined("-inf");
  if (is_exact()) return ExtReal(Rational(-q_));
  return approx(-d_);
}

int compare(const ExtReal& a, const ExtReal& b) {
  if (a.is_infinite() || b.is_infinite()) return int(a.is_infinite()) - int(b.is_infinite());
  if (a.is_exact() && b.is_exact()) {
    const int c = cmp(a.q_, b.q_);
    return (c > 0) - (c < 0);
  }
  const double x = a.to_double();
  const double y = b.to_double();
  return (x > y) - (x < y);
}

ExtReal pow(const ExtReal& base, const ExtReal& exponent) {
  if (exponent.is_infinite()) undefined("infinite exponent");
  if (base.is_infinite()) {
    const int s = exponent.sign();
    if (s > 0) return ExtReal::infinity();
    return ExtReal(s == 0 ? 1 : 0);
  }
  if (exponent.is_exact() && exponent.is_integer() && base.is_exact()) {
    const mpz_class& n = exponent.rational().get_num();
    if (abs(n) <= kMaxExactExponent) {
      const long k = n.get_si();
      if (k < 0 && base.is_zero()) undefined("0 raised to a negative power");
      const unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
      mpz_class num;
      mpz_class den;
      mpz_pow_ui(num.get_mpz_t(), base.rational().get_num_mpz_t(), e);
      mpz_pow_ui(den.get_mpz_t(), base.rational().get_den_mpz_t(), e);
      Rational q = k < 0 ? Rational(den, num) : Rational(num, den);
      q.canonicalize();
      return ExtReal(q);
    }
  }
  const double b = base.to_double();
  const double e = exponent.to_double();
  if (b < 0 && !exponent.is_integer()) undefined("negative base with non-integer exponent");
  if (b == 0 && e < 0) undefined("0 raised to a negative power");
  return ExtReal::approx(std::pow(b, e));
}

ExtReal abs(const ExtReal& x) { return x.sign() < 0 ? -x : x; }
ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }
ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

ExtReal harmonic(const ExtReal& n) {
  if (n.is_infinite()) return n;
  if (!n.is_integer() || n.sign() < 0)
    undefined("harm of non-natural argument " + to_string(n));
  const double nd = n.to_double();
  if (nd > kMaxExactHarmonic) {
    const double gamma = 0.57721566490153286061;
    return ExtReal::approx(std::log(nd) + gamma + 1.0 / (2 * nd) - 1.0 / (12 * nd * nd));
  }
  thread_local std::vector<Rational> cache{Rational(0)};
  const auto k = static_cast<std::size_t>(nd);
  while (cache.size() <= k) {
    Rational next = cache.back() + Rational(1, static_cast<unsigned long>(cache.size()));
    next.canonicalize();
    cache.push_back(next);
  }
  return ExtReal(cache[k]);
}

double distance(const ExtReal& a, const ExtReal& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite() || b.is_infinite()) return std::numeric_limits<double>::infinity();
  if (a.is_exact() && b.is_exact()) return Rational(abs(a.rational() - b.rational())).get_d();
  return std::fabs(a.to_double() - b.to_double());
}

std::string to_string(const ExtReal& x) {
  switch (x.kind()) {
    case ExtReal::Kind::Exact:
      return x.rational().get_str();
    case ExtReal::Kind::Infinite:
      return "inf";
    case ExtReal::Kind::Approx: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, x.to_double());
      return std::string(buf, res.ptr);
    }
  }
  return "?";
}

}  // namespace probcert::algebra

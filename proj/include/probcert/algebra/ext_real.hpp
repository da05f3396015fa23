// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>

#include "probcert/algebra/errors.hpp"

namespace probcert::algebra {

using Rational = mpq_class;

/// Extended real: exact rational, binary64 approximation, or +infinity.
/// Signed finite values are allowed; there is no negative infinity.
class ExtReal {
 public:
  enum class Kind { Exact, Approx, Infinite };

  ExtReal() : kind_(Kind::Exact), q_(0) {}
  ExtReal(const Rational& q) : kind_(Kind::Exact), q_(q) {}  // NOLINT(implicit)
  ExtReal(long v) : kind_(Kind::Exact), q_(v) {}             // NOLINT(implicit)
  ExtReal(int v) : kind_(Kind::Exact), q_(v) {}              // NOLINT(implicit)
  /// Non-finite doubles map to infinity (positive) or throw (NaN, negative infinity).
  static ExtReal approx(double v);
  static ExtReal infinity();

  Kind kind() const { return kind_; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  bool is_finite() const { return kind_ != Kind::Infinite; }
  bool is_exact() const { return kind_ == Kind::Exact; }
  bool is_approx() const { return kind_ == Kind::Approx; }
  /// Exact value; precondition is_exact().
  const Rational& rational() const { return q_; }
  double to_double() const;

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator*(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator/(const ExtReal& a, const ExtReal& b);
  ExtReal operator-() const;
  ExtReal& operator+=(const ExtReal& b) { return *this = *this + b; }
  ExtReal& operator*=(const ExtReal& b) { return *this = *this * b; }

  /// Three-way comparison; infinity equals infinity.
  friend int compare(const ExtReal& a, const ExtReal& b);
  friend bool operator==(const ExtReal& a, const ExtReal& b) { return compare(a, b) == 0; }
  friend bool operator!=(const ExtReal& a, const ExtReal& b) { return compare(a, b) != 0; }
  friend bool operator<(const ExtReal& a, const ExtReal& b) { return compare(a, b) < 0; }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return compare(a, b) <= 0; }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return compare(a, b) > 0; }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return compare(a, b) >= 0; }

 private:
  ExtReal(Kind kind, double d) : kind_(kind), d_(d) {}
  Kind kind_;
  Rational q_;
  double d_ = 0.0;
};

ExtReal pow(const ExtReal& base, const ExtReal& exponent);
ExtReal abs(const ExtReal& x);
ExtReal min(const ExtReal& a, const ExtReal& b);
ExtReal max(const ExtReal& a, const ExtReal& b);
/// Harmonic number H_n for integer n >= 0.
ExtReal harmonic(const ExtReal& n);

/// Absolute difference as a double (infinity when exactly one side is infinite, 0 when both are).
double distance(const ExtReal& a, const ExtReal& b);

std::string to_string(const ExtReal& x);

}  // namespace probcert::algebra

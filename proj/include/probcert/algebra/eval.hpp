// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "probcert/algebra/ext_real.hpp"
#include "probcert/syntax/ast.hpp"
#include "probcert/syntax/state.hpp"

namespace probcert::algebra {

using syntax::Expr;
using syntax::Pred;
using syntax::State;
using syntax::StateDomain;

/// Value of an expectation; throws NegativeExpectation if the result is negative.
ExtReal eval(const Expr& f, const State& s);
/// Value of an arithmetic expression; negative results allowed.
ExtReal eval_signed(const Expr& e, const State& s);
bool holds(const Pred& p, const State& s);

/// f[v/e]: syntactic replacement of every free occurrence of v by e.
Expr substitute(const Expr& f, const std::string& v, const Expr& e);
Pred substitute(const Pred& p, const std::string& v, const Expr& e);

/// Constant folding and neutral-element elimination; pointwise equal to the input.
Expr simplify(const Expr& f);
Pred simplify(const Pred& p);

enum class Verdict { LEQ, GEQ, EQ, INCOMPARABLE };
std::string to_string(Verdict v);

struct Violation {
  State witness;
  ExtReal lhs;
  ExtReal rhs;
  double magnitude = 0.0;
};

struct ComparisonResult {
  Verdict verdict = Verdict::EQ;
  /// State of maximal excess f1 - f2 > tol (f1 <= f2 violated).
  std::optional<Violation> leq_violation;
  /// State of maximal excess f2 - f1 > tol (f2 <= f1 violated); the strictness witness of LEQ.
  std::optional<Violation> geq_violation;
  double max_violation = 0.0;
  double tolerance_used = 0.0;
  bool used_floats = false;
  std::size_t states_checked = 0;

  bool leq() const { return verdict == Verdict::LEQ || verdict == Verdict::EQ; }
  bool geq() const { return verdict == Verdict::GEQ || verdict == Verdict::EQ; }
};

/// Minimum tolerance applied once a binary64 value takes part in a comparison.
inline constexpr double kFloatTolerance = 1e-6;

/// Accumulates a ComparisonResult from values computed elsewhere.
class PointwiseComparison {
 public:
  explicit PointwiseComparison(double tol);
  void add(const State& s, const ExtReal& lhs, const ExtReal& rhs);
  ComparisonResult result() const;

 private:
  ComparisonResult r_;
  double tol_;
};

/// Exhaustive pointwise comparison of f1 and f2 over d.
ComparisonResult compare_on_domain(const Expr& f1, const Expr& f2, const StateDomain& d, double tol);

/// Pointwise comparison helpers shared with the certificate checks.
double effective_tolerance(const ExtReal& a, const ExtReal& b, double tol);
/// Returns a - b as a magnitude (>= 0 means a exceeds b).
double excess(const ExtReal& a, const ExtReal& b);

}  // namespace probcert::algebra

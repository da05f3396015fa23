// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/algebra/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "probcert/syntax/printer.hpp"

namespace probcert::algebra {

namespace {

using Kind = Expr::Kind;

ExtReal literal_value(const Expr& e) { return ExtReal(e.value()); }

bool parity_even(const ExtReal& v, const Pred& p) {
  if (!v.is_integer())
    throw EvalError(EvalError::Kind::UndefinedArithmetic,
                    "parity of non-integer value " + to_string(v) + " in " + syntax::to_string(p));
  if (v.is_exact()) return mpz_even_p(v.rational().get_num_mpz_t()) != 0;
  return std::fmod(v.to_double(), 2.0) == 0.0;
}

}  // namespace

ExtReal eval_signed(const Expr& e, const State& s) {
  switch (e.kind()) {
    case Kind::Literal:
      return literal_value(e);
    case Kind::Infinity:
      return ExtReal::infinity();
    case Kind::Var:
      if (!s.has(e.name()))
        throw EvalError(EvalError::Kind::UnboundVariable,
                        "variable '" + e.name() + "' is unbound in state " + syntax::to_string(s));
      return ExtReal(s.get(e.name()));
    case Kind::Neg:
      return -eval_signed(e.operand(), s);
    case Kind::Abs:
      return abs(eval_signed(e.operand(), s));
    case Kind::Harm:
      return harmonic(eval_signed(e.operand(), s));
    case Kind::Add:
      return eval_signed(e.lhs(), s) + eval_signed(e.rhs(), s);
    case Kind::Sub:
      return eval_signed(e.lhs(), s) - eval_signed(e.rhs(), s);
    case Kind::Mul:
      return eval_signed(e.lhs(), s) * eval_signed(e.rhs(), s);
    case Kind::Div:
      return eval_signed(e.lhs(), s) / eval_signed(e.rhs(), s);
    case Kind::Pow:
      return pow(eval_signed(e.lhs(), s), eval_signed(e.rhs(), s));
    case Kind::Min:
      return min(eval_signed(e.lhs(), s), eval_signed(e.rhs(), s));
    case Kind::Max:
      return max(eval_signed(e.lhs(), s), eval_signed(e.rhs(), s));
    case Kind::Iverson:
      return ExtReal(holds(e.predicate(), s) ? 1 : 0);
  }
  return ExtReal(0);
}

ExtReal eval(const Expr& f, const State& s) {
  ExtReal v = eval_signed(f, s);
  if (v.sign() < 0)
    throw EvalError(EvalError::Kind::NegativeExpectation,
                    "expectation " + syntax::to_string(f) + " is negative (" + to_string(v) +
                        ") at " + syntax::to_string(s));
  return v;
}

bool holds(const Pred& p, const State& s) {
  using PK = Pred::Kind;
  switch (p.kind()) {
    case PK::True:
      return true;
    case PK::False:
      return false;
    case PK::Not:
      return !holds(p.operand(), s);
    case PK::And:
      return holds(p.lhs(), s) && holds(p.rhs(), s);
    case PK::Or:
      return holds(p.lhs(), s) || holds(p.rhs(), s);
    case PK::Even:
      return parity_even(eval_signed(p.lhs_expr(), s), p);
    case PK::Odd:
      return !parity_even(eval_signed(p.lhs_expr(), s), p);
    default:
      break;
  }
  const int c = compare(eval_signed(p.lhs_expr(), s), eval_signed(p.rhs_expr(), s));
  switch (p.kind()) {
    case PK::Lt:
      return c < 0;
    case PK::Le:
      return c <= 0;
    case PK::Gt:
      return c > 0;
    case PK::Ge:
      return c >= 0;
    case PK::Eq:
      return c == 0;
    case PK::Ne:
      return c != 0;
    default:
      return false;
  }
}

Expr substitute(const Expr& f, const std::string& v, const Expr& e) {
  switch (f.kind()) {
    case Kind::Literal:
    case Kind::Infinity:
      return f;
    case Kind::Var:
      return f.name() == v ? e : f;
    case Kind::Iverson: {
      Pred p = substitute(f.predicate(), v, e);
      return p == f.predicate() ? f : Expr::iverson(std::move(p));
    }
    case Kind::Neg:
    case Kind::Abs:
    case Kind::Harm: {
      Expr a = substitute(f.operand(), v, e);
      return a.node() == f.operand().node() ? f : Expr::unary(f.kind(), std::move(a));
    }
    default: {
      Expr a = substitute(f.lhs(), v, e);
      Expr b = substitute(f.rhs(), v, e);
      if (a.node() == f.lhs().node() && b.node() == f.rhs().node()) return f;
      return Expr::binary(f.kind(), std::move(a), std::move(b));
    }
  }
}

Pred substitute(const Pred& p, const std::string& v, const Expr& e) {
  using PK = Pred::Kind;
  switch (p.kind()) {
    case PK::True:
    case PK::False:
      return p;
    case PK::Not:
      return Pred::negate(substitute(p.operand(), v, e));
    case PK::And:
      return Pred::conj(substitute(p.lhs(), v, e), substitute(p.rhs(), v, e));
    case PK::Or:
      return Pred::disj(substitute(p.lhs(), v, e), substitute(p.rhs(), v, e));
    case PK::Even:
    case PK::Odd:
      return Pred::parity(p.kind(), substitute(p.lhs_expr(), v, e));
    default:
      return Pred::compare(p.kind(), substitute(p.lhs_expr(), v, e),
                           substitute(p.rhs_expr(), v, e));
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::LEQ:
      return "LEQ";
    case Verdict::GEQ:
      return "GEQ";
    case Verdict::EQ:
      return "EQ";
    case Verdict::INCOMPARABLE:
      return "INCOMPARABLE";
  }
  return "?";
}

double effective_tolerance(const ExtReal& a, const ExtReal& b, double tol) {
  if (a.is_approx() || b.is_approx()) return std::max(tol, kFloatTolerance);
  return tol;
}

double excess(const ExtReal& a, const ExtReal& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite()) return std::numeric_limits<double>::infinity();
  if (b.is_infinite()) return -std::numeric_limits<double>::infinity();
  if (a.is_exact() && b.is_exact()) {
    const Rational d = a.rational() - b.rational();
    const double x = d.get_d();
    if (x == 0.0 && sgn(d) != 0) return sgn(d) > 0 ? std::numeric_limits<double>::denorm_min()
                                                   : -std::numeric_limits<double>::denorm_min();
    return x;
  }
  return a.to_double() - b.to_double();
}

PointwiseComparison::PointwiseComparison(double tol) : tol_(tol) { r_.tolerance_used = tol; }

void PointwiseComparison::add(const State& s, const ExtReal& a, const ExtReal& b) {
  const double t = effective_tolerance(a, b, tol_);
  if (t > tol_) {
    r_.used_floats = true;
    r_.tolerance_used = std::max(r_.tolerance_used, t);
  }
  const double e = excess(a, b);
  auto record = [&](std::optional<Violation>& slot, double magnitude) {
    if (!slot || magnitude > slot->magnitude) slot = Violation{s, a, b, magnitude};
  };
  if (e > t) {
    record(r_.leq_violation, e);
    r_.max_violation = std::max(r_.max_violation, e);
  } else if (-e > t) {
    record(r_.geq_violation, -e);
    r_.max_violation = std::max(r_.max_violation, -e);
  }
  ++r_.states_checked;
}

ComparisonResult PointwiseComparison::result() const {
  ComparisonResult r = r_;
  if (!r.leq_violation && !r.geq_violation) {
    r.verdict = Verdict::EQ;
  } else if (!r.leq_violation) {
    r.verdict = Verdict::LEQ;
  } else if (!r.geq_violation) {
    r.verdict = Verdict::GEQ;
  } else {
    r.verdict = Verdict::INCOMPARABLE;
  }
  return r;
}

ComparisonResult compare_on_domain(const Expr& f1, const Expr& f2, const StateDomain& d,
                                   double tol) {
  PointwiseComparison cmp(tol);
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    const State s = d.at(i);
    cmp.add(s, eval_signed(f1, s), eval_signed(f2, s));
  }
  return cmp.result();
}

}  // namespace probcert::algebra

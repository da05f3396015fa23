// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/transformers/symbolic.hpp"

#include "probcert/syntax/printer.hpp"

namespace probcert::transformers {

namespace {

using Kind = Program::Kind;

Expr one() { return Expr::literal(1); }

Expr complement(const Expr& p) {
  if (p.kind() == Expr::Kind::Literal) return Expr::literal(1 - p.value());
  return one() - p;
}

Rational constant_bound(const Expr& e, const Program& c) {
  if (!syntax::free_variables(e).empty())
    throw TransformError(TransformError::Kind::NonConstantUniformBounds,
                         "uniform bounds must be constant in `" + syntax::to_string(c) + "`");
  algebra::ExtReal v = algebra::eval_signed(e, State{});
  if (!v.is_exact() || !v.is_integer())
    throw TransformError(TransformError::Kind::NonConstantUniformBounds,
                         "uniform bounds must be integers in `" + syntax::to_string(c) + "`");
  return v.rational();
}

Expr average_over_uniform(const Program& c, const Expr& f) {
  const Rational lo = constant_bound(c.lo(), c);
  const Rational hi = constant_bound(c.hi(), c);
  if (lo > hi)
    throw TransformError(TransformError::Kind::EmptyUniformRange,
                         "empty uniform range in `" + syntax::to_string(c) + "`");
  const mpz_class count = hi.get_num() - lo.get_num() + 1;
  std::optional<Expr> sum;
  for (mpz_class m = lo.get_num(); m <= hi.get_num(); ++m) {
    Expr term = algebra::substitute(f, c.var(), Expr::literal(Rational(m)));
    sum = sum ? *sum + term : term;
  }
  if (count == 1) return *sum;
  return Expr::literal(Rational(mpz_class(1), count)) * *sum;
}

Expr transform(TransformerKind kind, const Program& c, const Expr& f) {
  const bool ert = kind == TransformerKind::ERT;
  auto cost = [&](const Expr& e) { return ert ? one() + e : e; };
  switch (c.kind()) {
    case Kind::Skip:
      return cost(f);
    case Kind::Assign:
      return cost(algebra::substitute(f, c.var(), c.rhs()));
    case Kind::UnifAssign:
      return cost(average_over_uniform(c, f));
    case Kind::Seq:
      return transform(kind, c.first(), transform(kind, c.second(), f));
    case Kind::Ite:
      return cost(Expr::iverson(c.guard()) * transform(kind, c.first(), f) +
                  Expr::iverson(negate(c.guard())) * transform(kind, c.second(), f));
    case Kind::PChoice:
      return cost(c.prob() * transform(kind, c.first(), f) +
                  complement(c.prob()) * transform(kind, c.second(), f));
    case Kind::While:
      throw TransformError(TransformError::Kind::LoopEncountered,
                           "loop encountered in loop-free transformer: `while (" +
                               syntax::to_string(c.guard()) + ") ...`");
  }
  return f;
}

}  // namespace

std::string to_string(TransformerKind k) { return k == TransformerKind::WP ? "wp" : "ert"; }

Pred negate(const Pred& p) {
  using PK = Pred::Kind;
  switch (p.kind()) {
    case PK::True:
      return Pred::constant(false);
    case PK::False:
      return Pred::constant(true);
    case PK::Not:
      return p.operand();
    case PK::Lt:
      return Pred::compare(PK::Ge, p.lhs_expr(), p.rhs_expr());
    case PK::Le:
      return Pred::compare(PK::Gt, p.lhs_expr(), p.rhs_expr());
    case PK::Gt:
      return Pred::compare(PK::Le, p.lhs_expr(), p.rhs_expr());
    case PK::Ge:
      return Pred::compare(PK::Lt, p.lhs_expr(), p.rhs_expr());
    case PK::Eq:
      return Pred::compare(PK::Ne, p.lhs_expr(), p.rhs_expr());
    case PK::Ne:
      return Pred::compare(PK::Eq, p.lhs_expr(), p.rhs_expr());
    default:
      return Pred::negate(p);
  }
}

Expr wp_loopfree(const Program& c, const Expr& f) { return transform(TransformerKind::WP, c, f); }

Expr ert_loopfree(const Program& c, const Expr& t) { return transform(TransformerKind::ERT, c, t); }

Expr transform_loopfree(TransformerKind kind, const Program& c, const Expr& f) {
  return transform(kind, c, f);
}

Expr char_apply(TransformerKind kind, const Pred& guard, const Program& body, const Expr& f,
                const Expr& x) {
  Expr image = Expr::iverson(negate(guard)) * f + Expr::iverson(guard) * transform(kind, body, x);
  return kind == TransformerKind::ERT ? one() + image : image;
}

Expr iterate_char(TransformerKind kind, const Program& loop, const Expr& f, const Expr& x, int n) {
  if (loop.kind() != Program::Kind::While)
    throw Error("iterate_char expects a while loop, got `" + syntax::to_string(loop) + "`");
  Expr current = x;
  for (int i = 0; i < n; ++i)
    current = algebra::simplify(char_apply(kind, loop.guard(), loop.body(), f, current));
  return current;
}

}  // namespace probcert::transformers

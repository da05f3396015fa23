// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "probcert/algebra/eval.hpp"
#include "probcert/syntax/ast.hpp"

namespace probcert::transformers {

using syntax::Expr;
using syntax::Pred;
using syntax::Program;
using syntax::Rational;
using syntax::State;

enum class TransformerKind { WP, ERT };
std::string to_string(TransformerKind k);

class TransformError : public Error {
 public:
  enum class Kind { LoopEncountered, NonConstantUniformBounds, EmptyUniformRange };
  TransformError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Logical negation that flips comparisons instead of wrapping them in `not`.
Pred negate(const Pred& p);

Expr wp_loopfree(const Program& c, const Expr& f);
Expr ert_loopfree(const Program& c, const Expr& t);
Expr transform_loopfree(TransformerKind kind, const Program& c, const Expr& f);

/// Phi(X) = [not guard]*f + [guard]*wp(body, X), or 1 + [not guard]*t + [guard]*ert(body, X).
Expr char_apply(TransformerKind kind, const Pred& guard, const Program& body, const Expr& f,
                const Expr& x);
/// Phi^n(X) for a While program with loop-free body.
Expr iterate_char(TransformerKind kind, const Program& loop, const Expr& f, const Expr& x, int n);

}  // namespace probcert::transformers

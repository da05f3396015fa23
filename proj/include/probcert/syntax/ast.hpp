// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace probcert::syntax {

using Rational = mpq_class;

class Pred;
struct ExprNode;
struct PredNode;
struct ProgramNode;

/// Expectation / arithmetic expression. Immutable, cheap to copy.
class Expr {
 public:
  enum class Kind {
    Literal,
    Infinity,
    Var,
    Neg,
    Abs,
    Harm,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
    Iverson
  };

  Expr();  // literal 0

  static Expr literal(const Rational& value);
  static Expr literal(long value) { return literal(Rational(value)); }
  static Expr infinity();
  static Expr var(std::string name);
  static Expr unary(Kind kind, Expr operand);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);
  static Expr iverson(Pred predicate);

  Kind kind() const;
  const Rational& value() const;
  const std::string& name() const;
  const Expr& lhs() const;
  const Expr& rhs() const;
  const Expr& operand() const { return lhs(); }
  const Pred& predicate() const;
  const ExprNode* node() const { return node_.get(); }

  bool is_literal(long v) const;
  bool is_leaf() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);

/// Boolean predicate over arithmetic comparisons.
class Pred {
 public:
  enum class Kind { True, False, Lt, Le, Gt, Ge, Eq, Ne, Even, Odd, Not, And, Or };

  Pred();  // true

  static Pred constant(bool value);
  static Pred compare(Kind kind, Expr lhs, Expr rhs);
  static Pred parity(Kind kind, Expr operand);
  static Pred negate(Pred operand);
  static Pred conj(Pred lhs, Pred rhs);
  static Pred disj(Pred lhs, Pred rhs);

  Kind kind() const;
  const Expr& lhs_expr() const;
  const Expr& rhs_expr() const;
  const Pred& lhs() const;
  const Pred& rhs() const;
  const Pred& operand() const { return lhs(); }
  bool is_comparison() const;

  friend bool operator==(const Pred& a, const Pred& b);
  friend bool operator!=(const Pred& a, const Pred& b) { return !(a == b); }

 private:
  explicit Pred(std::shared_ptr<const PredNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const PredNode> node_;
};

/// pGCL statement tree.
class Program {
 public:
  enum class Kind { Skip, Assign, UnifAssign, Seq, Ite, PChoice, While };

  Program();  // skip

  static Program skip();
  static Program assign(std::string var, Expr rhs);
  static Program unif(std::string var, Expr lo, Expr hi);
  static Program seq(Program first, Program second);
  static Program ite(Pred guard, Program then_branch, Program else_branch);
  static Program pchoice(Program left, Expr prob, Program right);
  static Program loop(Pred guard, Program body);

  Kind kind() const;
  const std::string& var() const;
  const Expr& rhs() const;   // Assign
  const Expr& lo() const;    // UnifAssign
  const Expr& hi() const;    // UnifAssign
  const Expr& prob() const;  // PChoice
  const Pred& guard() const;
  const Program& first() const;   // Seq, Ite then, PChoice left, While body
  const Program& second() const;  // Seq, Ite else, PChoice right
  const Program& body() const { return first(); }
  const ProgramNode* node() const { return node_.get(); }

  bool is_loop_free() const;

  friend bool operator==(const Program& a, const Program& b);
  friend bool operator!=(const Program& a, const Program& b) { return !(a == b); }

 private:
  explicit Program(std::shared_ptr<const ProgramNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ProgramNode> node_;
};

struct ExprNode {
  Expr::Kind kind;
  Rational value;
  std::string name;
  std::vector<Expr> args;
  std::vector<Pred> preds;
};

struct PredNode {
  Pred::Kind kind;
  std::vector<Expr> exprs;
  std::vector<Pred> preds;
};

struct ProgramNode {
  Program::Kind kind;
  std::string var;
  std::vector<Expr> exprs;
  std::vector<Pred> preds;
  std::vector<Program> children;
  bool loop_free;
};

std::set<std::string> free_variables(const Expr& e);
std::set<std::string> free_variables(const Pred& p);
std::set<std::string> variables(const Program& c);
/// Variables that may be read before being written.
std::set<std::string> live_in_variables(const Program& c);

/// Splits `prefix; while ...` into its loop-free prefix and the first top-level loop.
struct LoopSplit {
  std::vector<Program> prefix;
  std::optional<Program> loop;
  std::vector<Program> suffix;
};
LoopSplit split_at_first_loop(const Program& c);
std::vector<Program> flatten_seq(const Program& c);
Program make_seq(const std::vector<Program>& stmts);

}  // namespace probcert::syntax

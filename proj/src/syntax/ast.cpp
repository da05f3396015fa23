// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/syntax/ast.hpp"

#include <algorithm>
#include <cassert>
#include <iterator>

namespace probcert::syntax {

namespace {

std::shared_ptr<const ExprNode> make_expr_node(Expr::Kind kind, Rational value, std::string name,
                                               std::vector<Expr> args, std::vector<Pred> preds) {
  return std::make_shared<const ExprNode>(
      ExprNode{kind, std::move(value), std::move(name), std::move(args), std::move(preds)});
}

const Expr& zero_expr() {
  static const Expr zero = Expr::literal(0);
  return zero;
}

}  // namespace

Expr::Expr() : Expr(zero_expr()) {}

Expr Expr::literal(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  return Expr(make_expr_node(Kind::Literal, v, {}, {}, {}));
}

Expr Expr::infinity() { return Expr(make_expr_node(Kind::Infinity, 0, {}, {}, {})); }

Expr Expr::var(std::string name) {
  return Expr(make_expr_node(Kind::Var, 0, std::move(name), {}, {}));
}

Expr Expr::unary(Kind kind, Expr operand) {
  assert(kind == Kind::Neg || kind == Kind::Abs || kind == Kind::Harm);
  return Expr(make_expr_node(kind, 0, {}, {std::move(operand)}, {}));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  assert(kind >= Kind::Add && kind <= Kind::Max);
  return Expr(make_expr_node(kind, 0, {}, {std::move(lhs), std::move(rhs)}, {}));
}

Expr Expr::iverson(Pred predicate) {
  return Expr(make_expr_node(Kind::Iverson, 0, {}, {}, {std::move(predicate)}));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const Expr& Expr::lhs() const { return node_->args.at(0); }
const Expr& Expr::rhs() const { return node_->args.at(1); }
const Pred& Expr::predicate() const { return node_->preds.at(0); }

bool Expr::is_literal(long v) const { return kind() == Kind::Literal && value() == v; }

bool Expr::is_leaf() const {
  return kind() == Kind::Literal || kind() == Kind::Infinity || kind() == Kind::Var;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const ExprNode& x = *a.node_;
  const ExprNode& y = *b.node_;
  return x.kind == y.kind && x.value == y.value && x.name == y.name && x.args == y.args &&
         x.preds == y.preds;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Div, a, b); }

namespace {

std::shared_ptr<const PredNode> make_pred_node(Pred::Kind kind, std::vector<Expr> exprs,
                                               std::vector<Pred> preds) {
  return std::make_shared<const PredNode>(PredNode{kind, std::move(exprs), std::move(preds)});
}

}  // namespace

Pred::Pred() : Pred(make_pred_node(Kind::True, {}, {})) {}

Pred Pred::constant(bool value) {
  return Pred(make_pred_node(value ? Kind::True : Kind::False, {}, {}));
}

Pred Pred::compare(Kind kind, Expr lhs, Expr rhs) {
  assert(kind >= Kind::Lt && kind <= Kind::Ne);
  return Pred(make_pred_node(kind, {std::move(lhs), std::move(rhs)}, {}));
}

Pred Pred::parity(Kind kind, Expr operand) {
  assert(kind == Kind::Even || kind == Kind::Odd);
  return Pred(make_pred_node(kind, {std::move(operand)}, {}));
}

Pred Pred::negate(Pred operand) { return Pred(make_pred_node(Kind::Not, {}, {std::move(operand)})); }

Pred Pred::conj(Pred lhs, Pred rhs) {
  return Pred(make_pred_node(Kind::And, {}, {std::move(lhs), std::move(rhs)}));
}

Pred Pred::disj(Pred lhs, Pred rhs) {
  return Pred(make_pred_node(Kind::Or, {}, {std::move(lhs), std::move(rhs)}));
}

Pred::Kind Pred::kind() const { return node_->kind; }
const Expr& Pred::lhs_expr() const { return node_->exprs.at(0); }
const Expr& Pred::rhs_expr() const { return node_->exprs.at(1); }
const Pred& Pred::lhs() const { return node_->preds.at(0); }
const Pred& Pred::rhs() const { return node_->preds.at(1); }
bool Pred::is_comparison() const { return kind() >= Kind::Lt && kind() <= Kind::Ne; }

bool operator==(const Pred& a, const Pred& b) {
  if (a.node_ == b.node_) return true;
  return a.node_->kind == b.node_->kind && a.node_->exprs == b.node_->exprs &&
         a.node_->preds == b.node_->preds;
}

namespace {

std::shared_ptr<const ProgramNode> make_program_node(Program::Kind kind, std::string var,
                                                     std::vector<Expr> exprs,
                                                     std::vector<Pred> preds,
                                                     std::vector<Program> children) {
  bool loop_free = kind != Program::Kind::While;
  for (const Program& c : children) loop_free = loop_free && c.is_loop_free();
  return std::make_shared<const ProgramNode>(ProgramNode{
      kind, std::move(var), std::move(exprs), std::move(preds), std::move(children), loop_free});
}

}  // namespace

Program::Program() : Program(make_program_node(Kind::Skip, {}, {}, {}, {})) {}

Program Program::skip() { return Program(); }

Program Program::assign(std::string var, Expr rhs) {
  return Program(make_program_node(Kind::Assign, std::move(var), {std::move(rhs)}, {}, {}));
}

Program Program::unif(std::string var, Expr lo, Expr hi) {
  return Program(
      make_program_node(Kind::UnifAssign, std::move(var), {std::move(lo), std::move(hi)}, {}, {}));
}

Program Program::seq(Program first, Program second) {
  return Program(make_program_node(Kind::Seq, {}, {}, {}, {std::move(first), std::move(second)}));
}

Program Program::ite(Pred guard, Program then_branch, Program else_branch) {
  return Program(make_program_node(Kind::Ite, {}, {}, {std::move(guard)},
                                   {std::move(then_branch), std::move(else_branch)}));
}

Program Program::pchoice(Program left, Expr prob, Program right) {
  return Program(make_program_node(Kind::PChoice, {}, {std::move(prob)}, {},
                                   {std::move(left), std::move(right)}));
}

Program Program::loop(Pred guard, Program body) {
  return Program(make_program_node(Kind::While, {}, {}, {std::move(guard)}, {std::move(body)}));
}

Program::Kind Program::kind() const { return node_->kind; }
const std::string& Program::var() const { return node_->var; }
const Expr& Program::rhs() const { return node_->exprs.at(0); }
const Expr& Program::lo() const { return node_->exprs.at(0); }
const Expr& Program::hi() const { return node_->exprs.at(1); }
const Expr& Program::prob() const { return node_->exprs.at(0); }
const Pred& Program::guard() const { return node_->preds.at(0); }
const Program& Program::first() const { return node_->children.at(0); }
const Program& Program::second() const { return node_->children.at(1); }
bool Program::is_loop_free() const { return node_->loop_free; }

bool operator==(const Program& a, const Program& b) {
  if (a.node_ == b.node_) return true;
  const ProgramNode& x = *a.node_;
  const ProgramNode& y = *b.node_;
  return x.kind == y.kind && x.var == y.var && x.exprs == y.exprs && x.preds == y.preds &&
         x.children == y.children;
}

namespace {

void collect(const Pred& p, std::set<std::string>& out);

void collect(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Expr::Kind::Literal:
    case Expr::Kind::Infinity:
      return;
    case Expr::Kind::Var:
      out.insert(e.name());
      return;
    case Expr::Kind::Iverson:
      collect(e.predicate(), out);
      return;
    default:
      for (const Expr& a : e.node()->args) collect(a, out);
  }
}

void collect(const Pred& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case Pred::Kind::True:
    case Pred::Kind::False:
      return;
    case Pred::Kind::Not:
      collect(p.operand(), out);
      return;
    case Pred::Kind::And:
    case Pred::Kind::Or:
      collect(p.lhs(), out);
      collect(p.rhs(), out);
      return;
    case Pred::Kind::Even:
    case Pred::Kind::Odd:
      collect(p.lhs_expr(), out);
      return;
    default:
      collect(p.lhs_expr(), out);
      collect(p.rhs_expr(), out);
  }
}

void collect(const Program& c, std::set<std::string>& out) {
  const ProgramNode& n = *c.node();
  if (!n.var.empty()) out.insert(n.var);
  for (const Expr& e : n.exprs) collect(e, out);
  for (const Pred& p : n.preds) collect(p, out);
  for (const Program& child : n.children) collect(child, out);
}

std::set<std::string> must_define(const Program& c) {
  switch (c.kind()) {
    case Program::Kind::Assign:
    case Program::Kind::UnifAssign:
      return {c.var()};
    case Program::Kind::Seq: {
      auto a = must_define(c.first());
      auto b = must_define(c.second());
      a.insert(b.begin(), b.end());
      return a;
    }
    case Program::Kind::Ite:
    case Program::Kind::PChoice: {
      auto a = must_define(c.first());
      auto b = must_define(c.second());
      std::set<std::string> both;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::inserter(both, both.end()));
      return both;
    }
    default:
      return {};
  }
}

}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

std::set<std::string> free_variables(const Pred& p) {
  std::set<std::string> out;
  collect(p, out);
  return out;
}

std::set<std::string> variables(const Program& c) {
  std::set<std::string> out;
  collect(c, out);
  return out;
}

std::set<std::string> live_in_variables(const Program& c) {
  std::set<std::string> out;
  switch (c.kind()) {
    case Program::Kind::Skip:
      break;
    case Program::Kind::Assign:
      collect(c.rhs(), out);
      break;
    case Program::Kind::UnifAssign:
      collect(c.lo(), out);
      collect(c.hi(), out);
      break;
    case Program::Kind::Seq: {
      out = live_in_variables(c.first());
      auto defined = must_define(c.first());
      for (const auto& v : live_in_variables(c.second()))
        if (!defined.count(v)) out.insert(v);
      break;
    }
    case Program::Kind::Ite:
      collect(c.guard(), out);
      [[fallthrough]];
    case Program::Kind::PChoice: {
      if (c.kind() == Program::Kind::PChoice) collect(c.prob(), out);
      auto a = live_in_variables(c.first());
      auto b = live_in_variables(c.second());
      out.insert(a.begin(), a.end());
      out.insert(b.begin(), b.end());
      break;
    }
    case Program::Kind::While: {
      collect(c.guard(), out);
      auto b = live_in_variables(c.body());
      out.insert(b.begin(), b.end());
      break;
    }
  }
  return out;
}

std::vector<Program> flatten_seq(const Program& c) {
  std::vector<Program> out;
  if (c.kind() != Program::Kind::Seq) {
    out.push_back(c);
    return out;
  }
  out = flatten_seq(c.first());
  auto rest = flatten_seq(c.second());
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

Program make_seq(const std::vector<Program>& stmts) {
  if (stmts.empty()) return Program::skip();
  Program result = stmts.back();
  for (auto it = std::next(stmts.rbegin()); it != stmts.rend(); ++it)
    result = Program::seq(*it, result);
  return result;
}

LoopSplit split_at_first_loop(const Program& c) {
  LoopSplit split;
  for (const Program& s : flatten_seq(c)) {
    if (!split.loop && s.kind() == Program::Kind::While) {
      split.loop = s;
    } else if (split.loop) {
      split.suffix.push_back(s);
    } else {
      split.prefix.push_back(s);
    }
  }
  return split;
}

}  // namespace probcert::syntax

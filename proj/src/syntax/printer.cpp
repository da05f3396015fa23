// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/syntax/printer.hpp"

namespace probcert::syntax {

namespace {

enum Level { kAdd = 1, kMul = 2, kUnary = 3, kPow = 4, kAtom = 5 };

int level(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Literal:
      if (e.value().get_den() != 1) return kMul;
      return e.value() < 0 ? kUnary : kAtom;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return kAdd;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return kMul;
    case Expr::Kind::Neg:
      return kUnary;
    case Expr::Kind::Pow:
      return kPow;
    default:
      return kAtom;
  }
}

std::string print(const Expr& e, int min_level);

std::string print_pred(const Pred& p, int min_level);

std::string wrap(const std::string& s, bool parens) { return parens ? "(" + s + ")" : s; }

std::string print_raw(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Literal:
      return to_string(e.value());
    case Expr::Kind::Infinity:
      return "inf";
    case Expr::Kind::Var:
      return e.name();
    case Expr::Kind::Neg:
      if (e.operand().kind() == Expr::Kind::Literal) return "-(" + print(e.operand(), 0) + ")";
      return "-" + print(e.operand(), kUnary);
    case Expr::Kind::Abs:
      return "abs(" + print(e.operand(), 0) + ")";
    case Expr::Kind::Harm:
      return "harm(" + print(e.operand(), 0) + ")";
    case Expr::Kind::Add:
      return print(e.lhs(), kAdd) + " + " + print(e.rhs(), kMul);
    case Expr::Kind::Sub:
      return print(e.lhs(), kAdd) + " - " + print(e.rhs(), kMul);
    case Expr::Kind::Mul:
      return print(e.lhs(), kMul) + "*" + print(e.rhs(), kUnary);
    case Expr::Kind::Div:
      return print(e.lhs(), kMul) + "/" + print(e.rhs(), kUnary);
    case Expr::Kind::Pow:
      return print(e.lhs(), kAtom) + "^" + print(e.rhs(), kUnary);
    case Expr::Kind::Min:
      return "min(" + print(e.lhs(), 0) + ", " + print(e.rhs(), 0) + ")";
    case Expr::Kind::Max:
      return "max(" + print(e.lhs(), 0) + ", " + print(e.rhs(), 0) + ")";
    case Expr::Kind::Iverson:
      return "[" + print_pred(e.predicate(), 0) + "]";
  }
  return "?";
}

std::string print(const Expr& e, int min_level) {
  return wrap(print_raw(e), level(e) < min_level);
}

int pred_level(const Pred& p) {
  switch (p.kind()) {
    case Pred::Kind::Or:
      return 1;
    case Pred::Kind::And:
      return 2;
    case Pred::Kind::Not:
      return 3;
    default:
      return 4;
  }
}

const char* comparison_symbol(Pred::Kind k) {
  switch (k) {
    case Pred::Kind::Lt:
      return "<";
    case Pred::Kind::Le:
      return "<=";
    case Pred::Kind::Gt:
      return ">";
    case Pred::Kind::Ge:
      return ">=";
    case Pred::Kind::Eq:
      return "=";
    case Pred::Kind::Ne:
      return "!=";
    default:
      return "?";
  }
}

std::string print_pred(const Pred& p, int min_level) {
  std::string s;
  switch (p.kind()) {
    case Pred::Kind::True:
      s = "true";
      break;
    case Pred::Kind::False:
      s = "false";
      break;
    case Pred::Kind::Even:
      s = "even(" + print(p.lhs_expr(), 0) + ")";
      break;
    case Pred::Kind::Odd:
      s = "odd(" + print(p.lhs_expr(), 0) + ")";
      break;
    case Pred::Kind::Not:
      s = "not " + print_pred(p.operand(), 3);
      break;
    case Pred::Kind::And:
      s = print_pred(p.lhs(), 2) + " and " + print_pred(p.rhs(), 3);
      break;
    case Pred::Kind::Or:
      s = print_pred(p.lhs(), 1) + " or " + print_pred(p.rhs(), 2);
      break;
    default:
      s = print(p.lhs_expr(), 0) + " " + comparison_symbol(p.kind()) + " " +
          print(p.rhs_expr(), 0);
  }
  return wrap(s, pred_level(p) < min_level);
}

bool is_simple(const Program& c) {
  return c.kind() == Program::Kind::Skip || c.kind() == Program::Kind::Assign ||
         c.kind() == Program::Kind::UnifAssign;
}

void print_program(const Program& c, int indent, std::string& out);

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

void print_block(const Program& c, int indent, std::string& out) {
  out += "{\n";
  print_program(c, indent + 1, out);
  out += "\n" + pad(indent) + "}";
}

void print_program(const Program& c, int indent, std::string& out) {
  if (c.kind() == Program::Kind::Seq) {
    if (c.first().kind() == Program::Kind::Seq) {
      out += pad(indent);
      print_block(c.first(), indent, out);
    } else {
      print_program(c.first(), indent, out);
    }
    out += ";\n";
    print_program(c.second(), indent, out);
    return;
  }
  out += pad(indent);
  switch (c.kind()) {
    case Program::Kind::Skip:
      out += "skip";
      return;
    case Program::Kind::Assign:
      out += c.var() + " := " + print(c.rhs(), 0);
      return;
    case Program::Kind::UnifAssign:
      out += c.var() + " := unif(" + print(c.lo(), 0) + ".." + print(c.hi(), 0) + ")";
      return;
    case Program::Kind::Seq:
      return;
    case Program::Kind::Ite:
      out += "if (" + print_pred(c.guard(), 0) + ") ";
      print_block(c.first(), indent, out);
      if (c.second().kind() != Program::Kind::Skip) {
        out += " else ";
        print_block(c.second(), indent, out);
      }
      return;
    case Program::Kind::PChoice: {
      const std::string prob = "[" + print(c.prob(), 0) + "]";
      std::string left;
      std::string right;
      print_program(c.first(), 0, left);
      print_program(c.second(), 0, right);
      if (is_simple(c.first()) && is_simple(c.second())) {
        out += "{ " + left + " } " + prob + " { " + right + " }";
      } else {
        print_block(c.first(), indent, out);
        out += " " + prob + " ";
        print_block(c.second(), indent, out);
      }
      return;
    }
    case Program::Kind::While:
      out += "while (" + print_pred(c.guard(), 0) + ") ";
      print_block(c.body(), indent, out);
      return;
  }
}

}  // namespace

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const Expr& e) { return print(e, 0); }

std::string to_string(const Pred& p) { return print_pred(p, 0); }

std::string to_string(const Program& c) {
  std::string out;
  print_program(c, 0, out);
  return out;
}

}  // namespace probcert::syntax

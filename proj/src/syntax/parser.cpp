// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/syntax/parser.hpp"

#include <set>

#include "lexer.hpp"
#include "probcert/syntax/printer.hpp"

namespace probcert::syntax {

namespace {

using detail::Token;

const std::set<std::string> kReserved = {"skip",  "if",   "else", "while", "unif", "true",
                                         "false", "and",  "or",   "not",   "inf",  "in",
                                         "min",   "max",  "abs",  "harm",  "even", "odd"};

bool is_integer(const Rational& q) { return q.get_den() == 1; }

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(detail::tokenize(text)) {}

  Program program() {
    Program p = statements();
    expect_end();
    return p;
  }

  Expr expectation() {
    Expr e = expr();
    expect_end();
    return e;
  }

  Pred predicate() {
    Pred p = pred();
    expect_end();
    return p;
  }

  StateDomain domain() {
    std::vector<StateDomain::Range> ranges;
    std::set<std::string> seen;
    while (!at_end()) {
      const Token& name_tok = peek();
      std::string var = identifier("variable name");
      if (!seen.insert(var).second)
        throw ParseError(name_tok.line, name_tok.column,
                         "duplicate variable '" + var + "' in domain");
      expect_keyword("in");
      StateDomain::Range range;
      range.var = var;
      if (accept("{")) {
        std::string text = "{";
        do {
          Rational v = signed_rational();
          if (text.size() > 1) text += ", ";
          text += to_string(v);
          range.values.push_back(v);
        } while (accept(","));
        expect("}");
        range.text = text + "}";
      } else {
        const Token& lo_tok = peek();
        Rational lo = signed_rational();
        if (!accept(".."))
          throw ParseError(peek().line, peek().column,
                           "malformed range: expected '..' or '{', found " + describe(peek()));
        Rational hi = signed_rational();
        if (!is_integer(lo) || !is_integer(hi))
          throw ParseError(lo_tok.line, lo_tok.column, "malformed range: bounds must be integers");
        if (lo > hi)
          throw ParseError(lo_tok.line, lo_tok.column,
                           "empty range " + to_string(lo) + ".." + to_string(hi) + " for '" +
                               var + "'");
        for (mpz_class v = lo.get_num(); v <= hi.get_num(); ++v) range.values.emplace_back(v);
        range.text = to_string(lo) + ".." + to_string(hi);
      }
      ranges.push_back(std::move(range));
      if (!accept(";")) break;
    }
    expect_end();
    return StateDomain(std::move(ranges));
  }

  State state() {
    State s;
    while (!at_end()) {
      const Token& name_tok = peek();
      std::string var = identifier("variable name");
      if (s.has(var))
        throw ParseError(name_tok.line, name_tok.column, "duplicate variable '" + var + "'");
      if (!accept("=") && !accept(":="))
        throw ParseError(peek().line, peek().column, "expected '=', found " + describe(peek()));
      s.set(var, signed_rational());
      if (!accept(",") && !accept(";")) break;
    }
    expect_end();
    return s;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool is_symbol(const std::string& s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Symbol && t.text == s;
  }
  bool is_keyword(const std::string& s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.text == s;
  }

  bool accept(const std::string& sym) {
    if (!is_symbol(sym)) return false;
    ++pos_;
    return true;
  }
  bool accept_keyword(const std::string& kw) {
    if (!is_keyword(kw)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(peek().line, peek().column,
                     "expected " + expected + ", found " + describe(peek()));
  }

  void expect(const std::string& sym) {
    if (!accept(sym)) fail("'" + sym + "'");
  }
  void expect_keyword(const std::string& kw) {
    if (!accept_keyword(kw)) fail("'" + kw + "'");
  }
  void expect_end() {
    if (!at_end()) fail("end of input");
  }

  std::string identifier(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident || kReserved.count(t.text)) fail(what);
    ++pos_;
    return t.text;
  }

  Rational signed_rational() {
    bool negative = accept("-");
    const Token& t = peek();
    if (t.kind != Token::Kind::Number) fail("number");
    ++pos_;
    Rational v = t.number;
    if (accept("/")) {
      const Token& d = peek();
      if (d.kind != Token::Kind::Number || !is_integer(d.number) || d.number == 0)
        fail("nonzero integer denominator");
      ++pos_;
      v /= d.number;
    }
    return negative ? Rational(-v) : v;
  }

  // ---- programs ----

  bool statement_follows() const {
    return !at_end() && !is_symbol("}");
  }

  Program statements() {
    std::vector<Program> stmts;
    if (!statement_follows()) return Program::skip();
    stmts.push_back(statement());
    while (accept(";")) {
      if (!statement_follows()) break;
      stmts.push_back(statement());
    }
    return make_seq(stmts);
  }

  Program block() {
    expect("{");
    Program p = statements();
    expect("}");
    return p;
  }

  Program statement() {
    if (accept_keyword("skip")) return Program::skip();
    if (accept_keyword("if")) return if_rest();
    if (accept_keyword("while")) {
      expect("(");
      Pred guard = pred();
      expect(")");
      return Program::loop(std::move(guard), block());
    }
    if (is_symbol("{")) {
      Program left = block();
      if (!accept("[")) return left;
      Expr prob = expr();
      expect("]");
      if (prob.kind() == Expr::Kind::Literal && (prob.value() < 0 || prob.value() > 1))
        throw ParseError(toks_[pos_ - 1].line, toks_[pos_ - 1].column,
                         "probability " + to_string(prob.value()) + " is outside [0, 1]");
      Program right = block();
      return Program::pchoice(std::move(left), std::move(prob), std::move(right));
    }
    if (peek().kind == Token::Kind::Ident) {
      std::string var = identifier("statement");
      expect(":=");
      if (accept_keyword("unif")) {
        expect("(");
        Expr lo = expr();
        expect("..");
        Expr hi = expr();
        expect(")");
        return Program::unif(std::move(var), std::move(lo), std::move(hi));
      }
      return Program::assign(std::move(var), expr());
    }
    fail("statement");
  }

  Program if_rest() {
    expect("(");
    Pred guard = pred();
    expect(")");
    Program then_branch = block();
    Program else_branch = Program::skip();
    if (accept_keyword("else")) {
      else_branch = accept_keyword("if") ? if_rest() : block();
    }
    return Program::ite(std::move(guard), std::move(then_branch), std::move(else_branch));
  }

  // ---- expressions ----

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept("+")) {
        lhs = lhs + term();
      } else if (accept("-")) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept("*")) {
        lhs = lhs * unary();
      } else if (accept("/")) {
        Expr rhs = unary();
        if (lhs.kind() == Expr::Kind::Literal && is_integer(lhs.value()) &&
            rhs.kind() == Expr::Kind::Literal && is_integer(rhs.value()) && rhs.value() != 0) {
          lhs = Expr::literal(lhs.value() / rhs.value());
        } else {
          lhs = lhs / rhs;
        }
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept("-")) {
      Expr operand = unary();
      if (operand.kind() == Expr::Kind::Literal) return Expr::literal(-operand.value());
      return Expr::unary(Expr::Kind::Neg, std::move(operand));
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept("^")) return Expr::binary(Expr::Kind::Pow, std::move(base), unary());
    return base;
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) {
      ++pos_;
      return Expr::literal(t.number);
    }
    if (accept("(")) {
      Expr e = expr();
      expect(")");
      return e;
    }
    if (accept("[")) {
      Pred p = pred();
      expect("]");
      return Expr::iverson(std::move(p));
    }
    if (t.kind == Token::Kind::Ident) {
      if (accept_keyword("inf")) return Expr::infinity();
      if (is_symbol("(", 1)) {
        const std::string fn = t.text;
        const Token fn_tok = t;
        pos_ += 2;
        if (fn == "min" || fn == "max") {
          Expr a = expr();
          expect(",");
          Expr b = expr();
          expect(")");
          return Expr::binary(fn == "min" ? Expr::Kind::Min : Expr::Kind::Max, std::move(a),
                              std::move(b));
        }
        if (fn == "abs" || fn == "harm") {
          Expr a = expr();
          expect(")");
          return Expr::unary(fn == "abs" ? Expr::Kind::Abs : Expr::Kind::Harm, std::move(a));
        }
        throw ParseError(fn_tok.line, fn_tok.column, "unknown function '" + fn + "'");
      }
      return Expr::var(identifier("expression"));
    }
    fail("expression");
  }

  // ---- predicates ----

  Pred pred() {
    Pred lhs = conjunction();
    while (accept_keyword("or") || accept("||")) lhs = Pred::disj(lhs, conjunction());
    return lhs;
  }

  Pred conjunction() {
    Pred lhs = negation();
    while (accept_keyword("and") || accept("&&")) lhs = Pred::conj(lhs, negation());
    return lhs;
  }

  Pred negation() {
    if (accept_keyword("not") || accept("!")) return Pred::negate(negation());
    return pred_atom();
  }

  static bool is_comparison_symbol(const Token& t) {
    if (t.kind != Token::Kind::Symbol) return false;
    return t.text == "<" || t.text == "<=" || t.text == ">" || t.text == ">=" || t.text == "=" ||
           t.text == "==" || t.text == "!=";
  }

  static bool continues_expression(const Token& t) {
    if (is_comparison_symbol(t)) return true;
    return t.kind == Token::Kind::Symbol &&
           (t.text == "+" || t.text == "-" || t.text == "*" || t.text == "/" || t.text == "^");
  }

  Pred pred_atom() {
    if (accept_keyword("true")) return Pred::constant(true);
    if (accept_keyword("false")) return Pred::constant(false);
    if ((is_keyword("even") || is_keyword("odd")) && is_symbol("(", 1)) {
      const bool even = peek().text == "even";
      pos_ += 2;
      Expr e = expr();
      expect(")");
      return Pred::parity(even ? Pred::Kind::Even : Pred::Kind::Odd, std::move(e));
    }
    if (is_symbol("(")) {
      const std::size_t saved = pos_;
      try {
        ++pos_;
        Pred inner = pred();
        expect(")");
        if (!continues_expression(peek())) return inner;
      } catch (const ParseError&) {
      }
      pos_ = saved;
    }
    return comparison();
  }

  Pred comparison() {
    Expr lhs = expr();
    if (!is_comparison_symbol(peek())) fail("comparison operator");
    Pred result;
    bool first = true;
    while (is_comparison_symbol(peek())) {
      const std::string op = peek().text;
      ++pos_;
      Expr rhs = expr();
      Pred::Kind kind = Pred::Kind::Eq;
      if (op == "<") kind = Pred::Kind::Lt;
      if (op == "<=") kind = Pred::Kind::Le;
      if (op == ">") kind = Pred::Kind::Gt;
      if (op == ">=") kind = Pred::Kind::Ge;
      if (op == "!=") kind = Pred::Kind::Ne;
      Pred atom = Pred::compare(kind, lhs, rhs);
      result = first ? atom : Pred::conj(result, atom);
      first = false;
      lhs = rhs;
    }
    return result;
  }
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }
Expr parse_expectation(std::string_view text) { return Parser(text).expectation(); }
Pred parse_predicate(std::string_view text) { return Parser(text).predicate(); }
StateDomain parse_domain(std::string_view text) { return Parser(text).domain(); }
State parse_state(std::string_view text) { return Parser(text).state(); }

}  // namespace probcert::syntax

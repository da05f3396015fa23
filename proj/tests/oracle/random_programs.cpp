#include "oracle/random_programs.hpp"

#include <string>

namespace probcert::oracle {

using syntax::Expr;
using syntax::Pred;
using syntax::Program;
using syntax::Rational;
using syntax::State;
using EK = Expr::Kind;
using PK = Pred::Kind;

Expr RandomPrograms::var() { return Expr::var(pick(2) == 0 ? "x" : "y"); }

Expr RandomPrograms::atom() {
  switch (pick(3)) {
    case 0:
      return Expr::literal(pick(4));
    default:
      return var();
  }
}

Rational RandomPrograms::weight() {
  static const long dens[] = {1, 2, 3, 4, 5};
  Rational q(pick(7), dens[pick(5)]);
  q.canonicalize();
  return q;
}

Pred RandomPrograms::predicate() {
  static const PK kinds[] = {PK::Lt, PK::Le, PK::Gt, PK::Ge, PK::Eq, PK::Ne};
  switch (pick(6)) {
    case 0:
      return Pred::parity(pick(2) == 0 ? PK::Even : PK::Odd, var());
    case 1:
      return Pred::conj(Pred::compare(kinds[pick(6)], var(), atom()),
                        Pred::compare(kinds[pick(6)], var(), atom()));
    default:
      return Pred::compare(kinds[pick(6)], var(), atom());
  }
}

Expr RandomPrograms::expectation(int depth) {
  if (depth == 0) return atom();
  switch (pick(6)) {
    case 0:
      return expectation(depth - 1) + expectation(depth - 1);
    case 1:
      return Expr::literal(weight()) * expectation(depth - 1);
    case 2:
      return Expr::iverson(predicate()) * expectation(depth - 1);
    case 3:
      return Expr::binary(EK::Max, expectation(depth - 1), expectation(depth - 1));
    case 4:
      return expectation(depth - 1) * atom();
    default:
      return atom();
  }
}

Program RandomPrograms::program(int depth) {
  const std::string v = pick(2) == 0 ? "x" : "y";
  if (depth == 0) {
    switch (pick(4)) {
      case 0:
        return Program::skip();
      case 1:
        return Program::unif(v, Expr::literal(0), Expr::literal(1 + pick(2)));
      case 2:
        return Program::assign(v, Expr::binary(EK::Max, var() - Expr::literal(1), Expr::literal(0)));
      default:
        return Program::assign(v, var() + Expr::literal(pick(3)));
    }
  }
  switch (pick(4)) {
    case 0:
      return Program::seq(program(depth - 1), program(depth - 1));
    case 1:
      return Program::ite(predicate(), program(depth - 1), program(depth - 1));
    case 2: {
      static const Rational probs[] = {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(3, 4)};
      return Program::pchoice(program(depth - 1), Expr::literal(probs[pick(4)]), program(depth - 1));
    }
    default:
      return program(depth - 1);
  }
}

State RandomPrograms::state() { return State{{"x", Rational(pick(5))}, {"y", Rational(pick(5))}}; }

std::vector<State> grid(int hi) {
  std::vector<State> out;
  for (int x = 0; x <= hi; ++x)
    for (int y = 0; y <= hi; ++y) out.push_back(State{{"x", Rational(x)}, {"y", Rational(y)}});
  return out;
}

}  // namespace probcert::oracle

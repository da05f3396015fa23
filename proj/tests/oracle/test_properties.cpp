// Randomized properties over seeded program and expectation generators.
#include <doctest.h>

#include "oracle/brute_force.hpp"
#include "oracle/random_programs.hpp"
#include "probcert/algebra/eval.hpp"
#include "probcert/syntax/parser.hpp"
#include "probcert/syntax/printer.hpp"
#include "probcert/transformers/engine.hpp"
#include "probcert/transformers/symbolic.hpp"
#include "support.hpp"

using namespace probcert;
using namespace probcert::oracle;
using algebra::ExtReal;
using probcert::test::ex;
using transformers::TransformerKind;

namespace {

constexpr int kPrograms = 200;

ExtReal at(const Expr& f, const State& s) { return algebra::eval(f, s); }

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("print and parse round-trip") {
    RandomPrograms gen(11);
    for (int i = 0; i < kPrograms; ++i) {
      Program p = gen.program(4);
      std::string text = syntax::to_string(p);
      CAPTURE(text);
      Program q = syntax::parse_program(text);
      CHECK(q == p);
      CHECK(syntax::to_string(q) == text);
      Expr e = gen.expectation(3);
      CHECK(syntax::parse_expectation(syntax::to_string(e)) == e);
    }
  }

  TEST_CASE("substitution lemma") {
    RandomPrograms gen(12);
    for (int i = 0; i < kPrograms; ++i) {
      Expr f = gen.expectation(3);
      Expr e = gen.expectation(2);
      State s = gen.state();
      CAPTURE(syntax::to_string(f));
      CAPTURE(syntax::to_string(e));
      ExtReal v = algebra::eval(e, s);
      REQUIRE(v.is_exact());
      CHECK(at(algebra::substitute(f, "x", e), s) == at(f, s.with("x", v.rational())));
    }
  }

  TEST_CASE("simplification is pointwise equal") {
    RandomPrograms gen(13);
    for (int i = 0; i < kPrograms; ++i) {
      Expr f = gen.expectation(3);
      Expr g = algebra::simplify(f);
      CAPTURE(syntax::to_string(f));
      CAPTURE(syntax::to_string(g));
      for (const State& s : grid(3)) CHECK(algebra::eval_signed(g, s) == algebra::eval_signed(f, s));
    }
  }

  TEST_CASE("domain comparison is transitive") {
    RandomPrograms gen(14);
    auto domain = syntax::parse_domain("x in 0..3; y in 0..3");
    for (int i = 0; i < kPrograms; ++i) {
      Expr f = gen.expectation(2);
      Expr g = f + gen.expectation(1);
      Expr h = g + gen.expectation(1);
      REQUIRE(algebra::compare_on_domain(f, g, domain, 0).leq());
      REQUIRE(algebra::compare_on_domain(g, h, domain, 0).leq());
      CHECK(algebra::compare_on_domain(f, h, domain, 0).leq());
    }
  }

  TEST_CASE("wp healthiness on random loop-free programs") {
    RandomPrograms gen(15);
    int checked = 0;
    for (int i = 0; i < kPrograms; ++i) {
      Program c = gen.program(3);
      Expr f = gen.expectation(2);
      Expr g = gen.expectation(2);
      Expr h = gen.expectation(2);
      Rational a = gen.weight();
      Rational b = gen.weight();
      CAPTURE(syntax::to_string(c));
      Expr wf = transformers::wp_loopfree(c, f);
      Expr wg = transformers::wp_loopfree(c, g);
      Expr zero = transformers::wp_loopfree(c, ex("0"));
      Expr lin = transformers::wp_loopfree(c, Expr::literal(a) * f + Expr::literal(b) * g);
      Expr mono = transformers::wp_loopfree(c, f + h);
      for (int k = 0; k < 4; ++k) {
        State s = gen.state();
        CHECK(at(zero, s) == ExtReal(0));
        CHECK(at(lin, s) == ExtReal(a) * at(wf, s) + ExtReal(b) * at(wg, s));
        CHECK(at(wf, s) <= at(mono, s));
        Dist d = run_loopfree(c, s);
        CHECK(at(wf, s) == ExtReal(expect(d, f)));
        ++checked;
      }
    }
    CHECK(checked == 4 * kPrograms);
  }

  TEST_CASE("ert splits into runtime and wp of the continuation") {
    RandomPrograms gen(16);
    for (int i = 0; i < kPrograms; ++i) {
      Program c = gen.program(3);
      Expr t = gen.expectation(2);
      Expr et = transformers::ert_loopfree(c, t);
      Expr e0 = transformers::ert_loopfree(c, ex("0"));
      Expr wt = transformers::wp_loopfree(c, t);
      State s = gen.state();
      CAPTURE(syntax::to_string(c));
      CHECK(at(et, s) == at(e0, s) + at(wt, s));
      CHECK(at(e0, s) == ExtReal(cost_loopfree(c, s)));
    }
  }

  TEST_CASE("engine matches the oracle on random loop-free programs") {
    RandomPrograms gen(17);
    for (int i = 0; i < 50; ++i) {
      Program c = gen.program(3);
      Expr f = gen.expectation(2);
      State s = gen.state();
      auto w = transformers::eval_transformer(TransformerKind::WP, c, f, s);
      auto e = transformers::eval_transformer(TransformerKind::ERT, c, f, s);
      CHECK(w.value.to_double() == doctest::Approx(expect(run_loopfree(c, s), f).get_d()).epsilon(1e-12));
      CHECK(e.value.to_double() ==
            doctest::Approx(Rational(cost_loopfree(c, s) + expect(run_loopfree(c, s), f)).get_d()).epsilon(1e-12));
    }
  }

  TEST_CASE("Kleene iterates increase towards the fixed point") {
    RandomPrograms gen(18);
    for (int i = 0; i < 40; ++i) {
      Program body = gen.program(2);
      Program loop = Program::loop(syntax::parse_predicate("0 < x and x < 4"),
                                   Program::seq(body, Program::pchoice(Program::assign("x", ex("x + 1")),
                                                                       ex("1/2"),
                                                                       Program::assign("x", ex("0")))));
      Expr f = gen.expectation(2);
      CAPTURE(syntax::to_string(loop));
      for (const State& s : grid(3)) {
        Rational prev = 0;
        for (int n = 0; n <= 6; ++n) {
          Rational cur = phi_power(loop, f, ex("0"), n, s);
          CHECK(prev <= cur);
          prev = cur;
        }
        transformers::Engine engine(TransformerKind::WP);
        CHECK(engine.phi_power(loop, f, ex("0"), 6, s) == ExtReal(prev));
        auto lfp = transformers::eval_transformer(TransformerKind::WP, loop, f, s);
        CHECK(lfp.value.to_double() >= prev.get_d() - 1e-9);
      }
    }
  }
}

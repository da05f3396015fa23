#include <doctest.h>

#include "probcert/algebra/eval.hpp"
#include "probcert/syntax/parser.hpp"
#include "probcert/syntax/printer.hpp"
#include "probcert/transformers/engine.hpp"
#include "probcert/transformers/symbolic.hpp"
#include "support.hpp"

using namespace probcert;
using namespace probcert::transformers;
using algebra::compare_on_domain;
using algebra::Verdict;
using probcert::test::ex;
using probcert::test::st;
using syntax::parse_domain;
using syntax::parse_predicate;
using syntax::parse_program;

namespace {

bool equal_on(const Expr& a, const Expr& b, const std::string& domain) {
  return compare_on_domain(a, b, parse_domain(domain), 0).verdict == Verdict::EQ;
}

}  // namespace

TEST_SUITE("transformers") {
  TEST_CASE("wp of loop-free programs") {
    Expr w = wp_loopfree(test::program("ex23"), ex("b"));
    CHECK(equal_on(w, ex("4*b/5 + 6"), "b in 0..100"));
    CHECK(syntax::to_string(algebra::simplify(w)) == "6 + 4/5*b");
    CHECK(wp_loopfree(parse_program("skip"), ex("x*y")) == ex("x*y"));
    CHECK(equal_on(wp_loopfree(parse_program("x := x-1"), ex("[0 < x]*x")), ex("[0 < x-1]*(x-1)"),
                   "x in 0..5"));
    CHECK(equal_on(wp_loopfree(parse_program("x := unif(1..3)"), ex("x")), ex("2"), "x in 0..0"));
    CHECK(equal_on(wp_loopfree(parse_program("if (x < 2) { x := 0 } else { skip }"), ex("x")),
                   ex("[x >= 2]*x"), "x in 0..5"));
  }

  TEST_CASE("ert of loop-free programs") {
    Expr e = ert_loopfree(test::program("ex82"), ex("0"));
    CHECK(equal_on(e, ex("4 + [b != 5]*4/5"), "b in 0..20"));
    CHECK(syntax::to_string(algebra::simplify(e)) == "4 + 4/5*[b != 5]");
    CHECK(equal_on(ert_loopfree(parse_program("skip"), ex("0")), ex("1"), "x in 0..0"));
    CHECK(equal_on(ert_loopfree(parse_program("skip; skip"), ex("t")), ex("2 + t"), "t in 0..4"));
  }

  TEST_CASE("loop-free transformer errors") {
    try {
      wp_loopfree(test::program("geo"), ex("b"));
      FAIL("expected LoopEncountered");
    } catch (const TransformError& e) {
      CHECK(e.kind() == TransformError::Kind::LoopEncountered);
    }
    CHECK_THROWS_AS(wp_loopfree(parse_program("x := unif(1..y)"), ex("x")), TransformError);
    CHECK_THROWS_AS(wp_loopfree(parse_program("x := unif(3..1)"), ex("x")), TransformError);
  }

  TEST_CASE("characteristic function") {
    Program geo = test::program("geo");
    Expr phi = char_apply(TransformerKind::WP, geo.guard(), geo.body(), ex("b"), ex("b+[a!=0]"));
    CHECK(equal_on(phi, ex("[a=0]*b + [a!=0]*(b + 1/2*(1+[a!=0]))"), "a in 0..2; b in 0..5"));
    CHECK(equal_on(phi, ex("b"), "a in 0..0; b in 0..5"));

    Program cex = test::program("cex");
    Expr fixed = char_apply(TransformerKind::WP, cex.guard(), cex.body(), ex("b"), ex("b+[a!=0]"));
    CHECK(equal_on(fixed, ex("b+[a!=0]"), "a in 0..2; b in 0..5; k in 0..3"));
  }

  TEST_CASE("iterated characteristic function") {
    Program geo = test::program("geo");
    CHECK(iterate_char(TransformerKind::WP, geo, ex("b"), ex("b+[a!=0]"), 0) == ex("b+[a!=0]"));
    Program cex = test::program("cex");
    CHECK(equal_on(iterate_char(TransformerKind::WP, cex, ex("b"), ex("b+[a!=0]"), 3), ex("b+[a!=0]"),
                   "a in 0..1; b in 0..4; k in 0..2"));
    for (int n = 1; n <= 6; ++n) {
      CAPTURE(n);
      Expr it = iterate_char(TransformerKind::WP, geo, ex("b"), ex("0"), n);
      Rational expected = 1 - Rational(n) / Rational(mpz_class(1) << (n - 1));
      CHECK(algebra::eval(it, st("a=1,b=0")) == algebra::ExtReal(expected));
    }
  }

  TEST_CASE("value iteration") {
    BoundedValue v = eval_transformer(TransformerKind::WP, test::program("geo"), ex("b"), st("a=1,b=0"));
    CHECK(v.converged);
    CHECK(v.value.to_double() == doctest::Approx(1.0).epsilon(1e-6));

    BoundedValue never = eval_transformer(TransformerKind::WP, test::program("diverge"), ex("1"), State{});
    CHECK(never.value == algebra::ExtReal(0));
    CHECK(never.converged);

    BoundedValue coupon = eval_transformer(TransformerKind::ERT, test::program("coupon3"), ex("0"), st("x=0"));
    CHECK(coupon.converged);
    CHECK(coupon.value.to_double() >= 6.5);
    CHECK(coupon.value.to_double() == doctest::Approx(25.0).epsilon(1e-6));

    BoundedValue runtime = eval_transformer(TransformerKind::ERT, test::program("diverge"), ex("0"), State{});
    CHECK(runtime.value.is_infinite());
  }

  TEST_CASE("loop-free programs evaluate exactly") {
    BoundedValue v = eval_transformer(TransformerKind::ERT, test::program("ex82"), ex("0"), st("b=0"));
    CHECK(v.value == algebra::ExtReal(Rational(24, 5)));
    CHECK(v.iterations == 0);
  }

  TEST_CASE("truncation yields lower bounds") {
    FixpointConfig cfg;
    cfg.truncation = parse_domain("x in 0..10");
    BoundedValue v = eval_transformer(TransformerKind::WP, test::program("rdw"), ex("y"), st("x=2,y=5"), cfg);
    CHECK(v.is_lower_bound_only);
    cfg.truncation = parse_domain("x in 0..20");
    BoundedValue wider = eval_transformer(TransformerKind::WP, test::program("rdw"), ex("y"), st("x=2,y=5"), cfg);
    CHECK(wider.is_lower_bound_only);
    CHECK(v.value.to_double() <= wider.value.to_double() + 1e-9);
    CHECK(v.value.to_double() > 0.0);
  }

  TEST_CASE("iteration trace is monotone") {
    FixpointConfig cfg;
    cfg.record_trace = true;
    BoundedValue v = eval_transformer(TransformerKind::WP, test::program("cex"), ex("b"), st("a=1,b=0,k=0"), cfg);
    REQUIRE(v.trace.size() >= 2);
    for (std::size_t i = 1; i < v.trace.size(); ++i) CHECK(v.trace[i - 1] <= v.trace[i] + 1e-12);
    CHECK(v.trace.back() == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("engine characteristic function matches symbolic") {
    Engine engine(TransformerKind::WP);
    Program geo = test::program("geo");
    for (int n = 0; n <= 5; ++n) {
      Expr sym = iterate_char(TransformerKind::WP, geo, ex("b"), ex("b"), n);
      for (const State& s : parse_domain("a in 0..1; b in 0..3").states()) {
        CHECK(engine.phi_power(geo, ex("b"), ex("b"), n, s) == algebra::eval(sym, s));
      }
    }
  }

  TEST_CASE("state space limit") {
    FixpointConfig cfg;
    cfg.max_states = 50;
    Program walk = parse_program("while (x > 0) { { x := x - 1 } [1/3] { x := x + 1 } }");
    CHECK_THROWS_AS(eval_transformer(TransformerKind::WP, walk, ex("1"), st("x=1"), cfg), StateSpaceExplosion);
  }

  TEST_CASE("configuration validation") {
    FixpointConfig cfg;
    cfg.abs_tol = 0;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.max_iters = 0;
    CHECK_THROWS(cfg.validate());
  }

  TEST_CASE("negation flips comparisons") {
    CHECK(negate(parse_predicate("x < 1")) == parse_predicate("x >= 1"));
    CHECK(negate(parse_predicate("a = 1")) == parse_predicate("a != 1"));
  }
}

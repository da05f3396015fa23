// Values computed by the reference oracle, frozen, and compared against the library.
#include <doctest.h>

#include "oracle/brute_force.hpp"
#include "probcert/syntax/parser.hpp"
#include "probcert/transformers/engine.hpp"
#include "probcert/transformers/symbolic.hpp"
#include "support.hpp"

using namespace probcert;
using namespace probcert::oracle;
using probcert::test::ex;
using probcert::test::st;
using transformers::TransformerKind;

namespace {

double engine_value(TransformerKind kind, const Program& c, const Expr& f, const State& s,
                    transformers::FixpointConfig cfg = {}) {
  auto v = transformers::eval_transformer(kind, c, f, s, cfg);
  REQUIRE(v.converged);
  return v.value.to_double();
}

}  // namespace

TEST_SUITE("oracle values") {
  TEST_CASE("geometric loop iterates from zero") {
    Program geo = test::program("geo");
    for (int n = 1; n <= 12; ++n) {
      CAPTURE(n);
      Rational frozen = 1 - Rational(n) / Rational(mpz_class(1) << (n - 1));
      CHECK(phi_power(geo, ex("b"), ex("0"), n, st("a=1,b=0")) == frozen);
      Expr sym = transformers::iterate_char(TransformerKind::WP, geo, ex("b"), ex("0"), n);
      CHECK(algebra::eval(sym, st("a=1,b=0")) == algebra::ExtReal(frozen));
      transformers::Engine engine(TransformerKind::WP);
      CHECK(engine.phi_power(geo, ex("b"), ex("0"), n, st("a=1,b=0")) == algebra::ExtReal(frozen));
    }
  }

  TEST_CASE("coupon collector runtime") {
    Program coupon = test::program("coupon3");
    ChainResult r = solve_chain(coupon, ex("0"), st("x=0"), Reward::Runtime);
    REQUIRE_FALSE(r.infinite);
    CHECK(r.value == 25);
    CHECK(engine_value(TransformerKind::ERT, coupon, ex("0"), st("x=0")) == doctest::Approx(25.0).epsilon(1e-7));

    syntax::LoopSplit split = syntax::split_at_first_loop(coupon);
    const Rational frozen[] = {1, 11, 18, 24};
    for (int x = 0; x <= 3; ++x) {
      CAPTURE(x);
      State s{{"x", Rational(x)}};
      ChainResult outer = solve_chain(*split.loop, ex("0"), s, Reward::Runtime);
      CHECK(outer.value == frozen[x]);
      CHECK(engine_value(TransformerKind::ERT, *split.loop, ex("0"), s) ==
            doctest::Approx(frozen[x].get_d()).epsilon(1e-7));
    }
    CHECK(solve_chain(coupon, ex("1"), st("x=0"), Reward::Post).value == 1);
  }

  TEST_CASE("loop-free examples") {
    for (int b = 0; b <= 100; ++b) {
      State s{{"b", Rational(b)}};
      CHECK(expect(run_loopfree(test::program("ex23"), s), ex("b")) == Rational(4 * b) / 5 + 6);
    }
    CHECK(cost_loopfree(test::program("ex82"), st("b=5")) == 4);
    CHECK(cost_loopfree(test::program("ex82"), st("b=0")) == Rational(24, 5));
    CHECK(solve_chain(test::program("ex82"), ex("0"), st("b=0"), Reward::Runtime).value == Rational(24, 5));
  }

  TEST_CASE("counterexample loop") {
    Program cex = test::program("cex");
    CHECK(phi_power(cex, ex("b"), ex("b + [a != 0]"), 3, st("a=1,b=0,k=0")) == 1);
    Rational near = phi_power(cex, ex("b"), ex("0"), 40, st("a=1,b=7,k=0"));
    CHECK(8 - near < Rational(1, 1000000));
    CHECK(engine_value(TransformerKind::WP, cex, ex("b"), st("a=1,b=7,k=0")) == doctest::Approx(8.0).epsilon(1e-6));
    Rational prime = phi_power(cex, ex("b"), ex("b + [a != 0]*(1 + 2^k)"), 12, st("a=1,b=0,k=0"));
    CHECK(prime == 2);
  }

  TEST_CASE("doubling with bounded looping time") {
    Program dbl = test::program("double");
    for (int x = 0; x <= 6; ++x) {
      for (int y = 0; y <= 3; ++y) {
        State s{{"x", Rational(x)}, {"y", Rational(y)}};
        Rational frozen = y;
        for (int i = 0; i < x; ++i) frozen *= Rational(3, 2);
        CHECK(phi_power(dbl, ex("y"), ex("0"), x + 1, s) == frozen);
        CHECK(engine_value(TransformerKind::WP, dbl, ex("y"), s) == doctest::Approx(frozen.get_d()).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("negative binomial loop") {
    Program neg = test::program("neg");
    for (int x = 0; x <= 4; ++x) {
      State s{{"x", Rational(x)}, {"k", Rational(2)}};
      CHECK(engine_value(TransformerKind::WP, neg, ex("k"), s) == doctest::Approx(2.0 + x).epsilon(1e-6));
    }
  }

  TEST_CASE("finite random walks against the linear solve") {
    Program walk = syntax::parse_program(
        "while (x < 4 and 0 < x) { { x := x + 1 } [1/3] { x := x - 1 } }");
    Program bounded = syntax::parse_program(
        "while (0 < x) { { x := x - 1 } [1/2] { x := unif(0..2) }; if (x = 1) { skip } else { skip; skip } }");
    for (int x = 0; x <= 4; ++x) {
      State s{{"x", Rational(x)}, {"y", Rational(0)}};
      CAPTURE(x);
      CHECK(engine_value(TransformerKind::WP, walk, ex("[x = 4]"), s) ==
            doctest::Approx(solve_chain(walk, ex("[x = 4]"), s, Reward::Post).value.get_d()).epsilon(1e-8));
      CHECK(engine_value(TransformerKind::ERT, walk, ex("x"), s) ==
            doctest::Approx(solve_chain(walk, ex("x"), s, Reward::Runtime).value.get_d()).epsilon(1e-8));
      if (x <= 2) {
        CHECK(engine_value(TransformerKind::ERT, bounded, ex("0"), s) ==
              doctest::Approx(solve_chain(bounded, ex("0"), s, Reward::Runtime).value.get_d()).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("nontermination") {
    Program diverge = test::program("diverge");
    CHECK(solve_chain(diverge, ex("1"), State{}, Reward::Post).value == 0);
    CHECK(solve_chain(diverge, ex("0"), State{}, Reward::Runtime).infinite);
  }
}

#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "rzk/context.hpp"
#include "rzk/lambda.hpp"
#include "rzk/term.hpp"
#include "subst_oracle.hpp"
#include "test_util.hpp"

using namespace rzk;
using namespace rzk::testutil;

namespace {

const PcaContext& ctx() {
  static const PcaContext c({"c0", "c1"});
  return c;
}

}  // namespace

TEST_CASE("compile: identity, constant selection, projection") {
  Term idt = compile(LambdaTerm::lam("x", LambdaTerm::var("x")));
  auto r = apply(idt, Term::oracle("c0"), 10000);
  REQUIRE(r.normalized());
  CHECK(r.term() == Term::oracle("c0"));

  Term fst_lam = compile(LambdaTerm::lam("x", LambdaTerm::lam("y", LambdaTerm::var("x"))));
  auto r1 = apply(fst_lam, Term::oracle("c0"), 10000);
  REQUIRE(r1.normalized());
  auto r2 = apply(r1.term(), Term::oracle("c1"), 10000);
  REQUIRE(r2.normalized());
  CHECK(r2.term() == Term::oracle("c0"));

  Term proj = compile(LambdaTerm::lam(
      "x", LambdaTerm::app(LambdaTerm::constant(ctx().proj0()), LambdaTerm::var("x"))));
  Term pr = ctx().pair_of(Term::oracle("c0"), Term::oracle("c1"));
  auto r3 = apply(proj, pr, 10000);
  REQUIRE(r3.normalized());
  CHECK(r3.term() == Term::oracle("c0"));
}

TEST_CASE("compile: open terms are rejected") {
  CHECK_THROWS_AS(compile(LambdaTerm::var("x")), FreeVariable);
  CHECK_THROWS_AS(
      compile(LambdaTerm::lam("x", LambdaTerm::app(LambdaTerm::var("x"), LambdaTerm::var("y")))),
      FreeVariable);
}

TEST_CASE("standard realizers") {
  CHECK(standard_realizer("id") == compile(LambdaTerm::lam("x", LambdaTerm::var("x"))));
  CHECK_THROWS_AS(standard_realizer("nope"), UnknownName);

  Term a = Term::oracle("c0");
  Term b = Term::oracle("c1");
  auto f = apply(standard_realizer("fst"), ctx().pair_of(a, b), 10000);
  REQUIRE(f.normalized());
  CHECK(f.term() == a);
  auto s = apply(standard_realizer("snd"), ctx().pair_of(a, b), 10000);
  REQUIRE(s.normalized());
  CHECK(s.term() == b);

  // case (p K c0) f g ~ f c0
  Term z = ctx().pair_of(Term::k(), a);
  Term lhs_t = Term::app(standard_realizer("case"), z, Term::k(), Term::s());
  auto lhs = reduce(lhs_t, 10000);
  auto rhs = reduce(Term::app(Term::k(), a), 10000);
  REQUIRE(lhs.normalized());
  REQUIRE(rhs.normalized());
  CHECK(lhs.term() == rhs.term());
}

TEST_CASE("guarded case defers the unselected branch") {
  Term i = Term::app(Term::s(), Term::k(), Term::k());
  Term omega = Term::app(Term::s(), i, i);
  Term diverging = Term::app(omega, omega);

  // left selection never looks inside the diverging right branch
  Term z = ctx().pair_of(Term::k(), Term::oracle("c0"));
  auto r = reduce(Term::app(ctx().case_guard(), z, Term::k(), diverging), 10000);
  REQUIRE(r.normalized());
  CHECK(r.term() == Term::app(Term::k(), Term::oracle("c0")));

  // right selection symmetric
  Term z2 = ctx().pair_of(ctx().kbar(), Term::oracle("c1"));
  auto r2 = reduce(Term::app(ctx().case_guard(), z2, diverging, Term::k()), 10000);
  REQUIRE(r2.normalized());
  CHECK(r2.term() == Term::app(Term::k(), Term::oracle("c1")));
}

TEST_CASE("compilation soundness against the substitution oracle") {
  Rng rng(0xABCD);
  std::vector<Term> pool{Term::k(), Term::s(), Term::oracle("c0"), ctx().identity(),
                         ctx().proj0()};
  std::vector<std::string> oracle_names{"c0", "c1"};
  int compared = 0;
  for (int iter = 0; iter < 200; ++iter) {
    RandomClosed rc = random_closed(rng, pool);
    Term compiled = compile(rc.e);

    Term lhs_app = compiled;
    HRef rhs_app = from_lambda(rc.e);
    for (unsigned i = 0; i < rc.binders; ++i) {
      Term arg = testutil::random_normal_form(rng, 3, oracle_names);
      lhs_app = Term::app(lhs_app, arg);
      rhs_app = hmk(HT::App, {}, rhs_app, from_term(arg));
    }

    auto lhs = reduce(lhs_app, 6000);
    HRef rhs;
    bool rhs_ok = hreduce(rhs_app, 6000, rhs);
    if (!lhs.normalized() || !rhs_ok) continue;  // co-termination only
    Agree v = agree(lhs.term(), rhs, 2);
    CHECK(v != Agree::No);
    if (v == Agree::Yes) ++compared;
  }
  CHECK(compared > 100);  // the sample must be mostly meaningful
}

TEST_CASE("sub-pca preservation of compilation") {
  Rng rng(99);
  std::vector<Term> pure_pool{Term::k(), Term::s(), ctx().identity(), ctx().kbar()};
  for (int iter = 0; iter < 100; ++iter) {
    RandomClosed rc = random_closed(rng, pure_pool);
    CHECK(compile(rc.e).pure());
  }
}

TEST_CASE("lambda parsing") {
  LambdaTerm e = parse_lambda("\\x. \\y. x (K y) #c0");
  Term t = compile(e);
  CHECK(t.pure() == false);  // contains the oracle constant
  // body = x (K y) #c0 with x := K, y := S steps through the K redex to K S
  auto r = reduce(Term::app(t, Term::k(), Term::s()), 10000);
  REQUIRE(r.normalized());
  CHECK(r.term() == Term::app(Term::k(), Term::s()));
  CHECK_THROWS_AS(parse_lambda("\\x"), SyntaxError);
  CHECK_THROWS_AS(parse_lambda("(\\x. x"), SyntaxError);
}

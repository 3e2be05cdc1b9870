#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "idt/desc.hpp"
#include "idt/kernel.hpp"
#include "support.hpp"

using namespace idt;

namespace {

Globals noGlobals;

TermP closedNorm(const TermP& t) { return normalize(Ctx(&noGlobals), t); }

TermP abc() { return enumLit({"a", "b", "c"}); }

}  // namespace

TEST_CASE("beta reduction and readback") {
  Ctx ctx(&noGlobals);
  Ctx c1 = ctx.extend("y", vset(0));
  TermP t = app(lam("x", var(0)), var(0));
  CHECK(alphaEq(normalize(c1, t), var(0)));
  TermP k = app(app(lam("x", lam("y", var(1))), unit()), tt());
  CHECK(alphaEq(closedNorm(k), unit()));
}

TEST_CASE("universe levels") {
  Ctx ctx(&noGlobals);
  CHECK(checkType(ctx, set(0)) == 1);
  CHECK(checkType(ctx, set(1)) == 2);
  CHECK(checkType(ctx, unit()) == 0);
  CHECK(checkType(ctx, pi("A", set(0), arrow(var(0), var(0)))) == 1);
  CHECK_THROWS_AS(check(ctx, set(0), vset(0)), KernelError);
  CHECK_NOTHROW(check(ctx, set(0), vset(2)));
}

TEST_CASE("application of a non-function is rejected") {
  Ctx ctx(&noGlobals);
  try {
    infer(ctx, app(tt(), tt()));
    FAIL("expected a kernel error");
  } catch (const KernelError& e) {
    CHECK(e.kind == KErr::NotAFunction);
  }
}

TEST_CASE("switch selects the branch at an index") {
  TermP E = abc();
  TermP P = lam("_", unit());
  TermP branches = tupleTerm({tt(), tt(), tt()});
  Ctx ctx(&noGlobals);
  CHECK_NOTHROW(infer(ctx, mk(K::Switch, {E, P, branches, numeral(2)})));
  TermP sel = mk(K::Switch, {E, lam("_", set(0)), tupleTerm({unit(), set(0), enumLit({"z"})}), numeral(1)});
  CHECK(alphaEq(closedNorm(sel), set(0)));
}

TEST_CASE("split and unitElim compute on canonical arguments") {
  TermP S = sigma("x", unit(), unit());
  TermP C = lam("_", unit());
  TermP f = lam("a", lam("b", var(0)));
  TermP t = mk(K::Split, {C, f, pair(tt(), tt())});
  Ctx ctx(&noGlobals);
  CHECK_NOTHROW(check(ctx, mk(K::Ann, {pair(tt(), tt()), S}), ctx.eval(S)));
  CHECK(alphaEq(closedNorm(t), tt()));
  TermP u = mk(K::UnitElim, {lam("_", set(0)), unit(), tt()});
  CHECK(alphaEq(closedNorm(u), unit()));
}

TEST_CASE("J on refl returns the base case") {
  TermP A = enumLit({"a"});
  TermP AT = mk(K::EnumT, {A});
  TermP P = lam("y", lam("q", unit()));
  TermP t = mk(K::J, {AT, numeral(0), P, tt(), numeral(0), refl()});
  Ctx ctx(&noGlobals);
  CHECK_NOTHROW(infer(ctx, t));
  CHECK(alphaEq(closedNorm(t), tt()));
}

TEST_CASE("interpretation of descriptions") {
  V X = vunit();
  V D = vmk(K::DTimes, {vmk(K::DVar), vmk(K::DOne)});
  V I = interpDesc(D, X);
  REQUIRE(I->k == K::Sigma);
  CHECK(I->a[0]->k == K::Unit);
  V pi = interpDesc(vmk(K::DPi, {vunit(), vlam("_", [](V) { return vmk(K::DVar); })}), vset(0));
  CHECK(pi->k == K::Pi);
}

TEST_CASE("induction over a hand-written natural number code") {
  Globals g;
  addGlobal(g, "NatD", mk(K::Desc), natDesc());
  Ctx ctx(&g);
  TermP D = cnst("NatD");
  TermP z = mk(K::In, {pair(numeral(0), tt())});
  auto s = [](TermP n) { return mk(K::In, {pair(numeral(1), n)}); };
  TermP two = s(s(z));
  CHECK_NOTHROW(check(ctx, two, vmk(K::Mu, {ctx.eval(D)})));
  CHECK_THROWS_AS(check(ctx, mk(K::In, {pair(numeral(1), tt())}), vmk(K::Mu, {ctx.eval(D)})), KernelError);

  TermP P = lam("_", unit());
  TermP m = lam("d", lam("h", tt()));
  TermP t = mk(K::Induction, {D, P, m, two});
  CHECK_NOTHROW(infer(ctx, t));
  CHECK(alphaEq(normalize(ctx, t), tt()));

  Ctx c1 = ctx.extend("n", vmk(K::Mu, {ctx.eval(D)}));
  TermP stuck = normalize(c1, mk(K::Induction, {D, P, m, var(0)}));
  CHECK(stuck->k == K::Induction);
}

TEST_CASE("alpha-equality ignores binder names and printing hints") {
  CHECK(alphaEq(lam("x", var(0)), lam("y", var(0))));
  CHECK(alphaEq(numeral(1, "suc"), numeral(1)));
  CHECK_FALSE(alphaEq(numeral(1), numeral(2)));
  CHECK(alphaEq(mk(K::In, {tt()}, "leaf", 1), mk(K::In, {tt()})));
}

TEST_CASE("shift and substitution") {
  TermP t = app(var(0), var(2));
  CHECK(alphaEq(shift(t, 1), app(var(1), var(3))));
  CHECK(alphaEq(shift(t, 1, 1), app(var(0), var(3))));
  CHECK(alphaEq(subst1(t, tt()), app(tt(), var(1))));
  TermP under = lam("x", app(var(1), var(0)));
  CHECK(alphaEq(subst1(under, var(5)), lam("x", app(var(6), var(0)))));
  CHECK(mentionsVar(t, 2));
  CHECK_FALSE(mentionsVar(t, 1));
}

TEST_CASE("decEnum builtin reduces on canonical indices") {
  TermP E = abc();
  TermP P = lam("x", lam("y", set(0)));
  TermP other = mk(K::EnumT, {enumLit({"n"})});
  TermP yes = lam("x", unit());
  TermP no = lam("x", lam("y", other));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      TermP t = mk(K::DecEnum, {E, numeral(i), numeral(j), P, yes, no});
      Ctx ctx(&noGlobals);
      CHECK_NOTHROW(infer(ctx, t));
      CHECK(alphaEq(closedNorm(t), i == j ? unit() : other));
    }
}

TEST_CASE("addGlobal rejects an ill-typed definition") {
  Globals g;
  CHECK_THROWS_AS(addGlobal(g, "bad", unit(), set(0)), KernelError);
  CHECK(g.find("bad") == nullptr);
  addGlobal(g, "u", unit(), tt());
  Ctx ctx(&g);
  CHECK(alphaEq(normalize(ctx, cnst("u")), tt()));
}

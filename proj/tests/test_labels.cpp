#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "idt/labels.hpp"
#include "support.hpp"

using namespace idt;
using idt::test::errorKind;
using idt::test::loaded;
using idt::test::natTerm;

namespace {

const char* kTwo =
    "data Two : Set where\n"
    "  Two => a\n"
    "  Two => b\n";

Session withTwo() {
  Session s = loaded({"prelude.idt", "families.idt"});
  REQUIRE(idt::test::declare(s, kTwo).empty());
  return s;
}

}  // namespace

TEST_CASE("plus agrees with addition") {
  Session s = loaded({"prelude.idt"});
  for (int m = 0; m <= 10; ++m)
    for (int n = 0; n <= 10; ++n) {
      CAPTURE(m);
      CAPTURE(n);
      CHECK(s.evalExpr("plus " + natTerm(m) + " " + natTerm(n)) == std::to_string(m + n));
    }
}

TEST_CASE("a recursive call stays stuck on a variable") {
  Session s = loaded({"prelude.idt"});
  CHECK(s.evalExpr("(\\k. plus (suc zero) k : Nat -> Nat)") == "\\k. suc k");
  CHECK(s.evalExpr("(\\k. plus k zero : Nat -> Nat)") == "\\k. plus k 0");
}

TEST_CASE("case over an enumeration-like datatype") {
  Session s = withTwo();
  CHECK(idt::test::declare(s,
                           "let flip (x : Two) : Two where\n"
                           "  flip x by case x {\n"
                           "    flip a => b ;\n"
                           "    flip b => a\n"
                           "  }\n")
            .empty());
  CHECK(s.evalExpr("flip a") == "b");
  CHECK(s.evalExpr("flip (flip a)") == "a");
}

TEST_CASE("nested by blocks") {
  Session s = loaded({"prelude.idt"});
  CHECK(idt::test::declare(s,
                           "let both (m : Nat) (n : Nat) : Bool where\n"
                           "  both m n by case m {\n"
                           "    both zero n => false ;\n"
                           "    both (suc k) n by case n {\n"
                           "      both (suc k) zero => false ;\n"
                           "      both (suc k) (suc j) => true\n"
                           "    }\n"
                           "  }\n")
            .empty());
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      CHECK(s.evalExpr("both " + natTerm(m) + " " + natTerm(n)) == (m > 0 && n > 0 ? "true" : "false"));
}

TEST_CASE("a scrutinee must be a whole argument of the label") {
  Session s = loaded({"prelude.idt"});
  CHECK(errorKind(s,
                  "let small (m : Nat) : Bool where\n"
                  "  small m by case m {\n"
                  "    small zero => true ;\n"
                  "    small (suc k) by case k {\n"
                  "      small (suc zero) => true ;\n"
                  "      small (suc (suc j)) => false\n"
                  "    }\n"
                  "  }\n") == "UnsupportedScrutinee");
}

TEST_CASE("hypotheses fix the other arguments") {
  // The motive abstracts only m, so the hypothesis for k is at the original n.
  Session s = loaded({"prelude.idt"});
  CHECK(errorKind(s,
                  "let max (m : Nat) (n : Nat) : Nat where\n"
                  "  max m n by rec m {\n"
                  "    max zero n => n ;\n"
                  "    max (suc k) n by case n {\n"
                  "      max (suc k) zero => suc k ;\n"
                  "      max (suc k) (suc j) => suc (max k j)\n"
                  "    }\n"
                  "  }\n") == "UnjustifiedCall");
}

TEST_CASE("eliminator errors") {
  Session s = withTwo();
  CHECK(errorKind(s,
                  "let f (x : Two) : Two where\n"
                  "  f x by case x {\n"
                  "    f a => b\n"
                  "  }\n") == "MissingClause");
  CHECK(errorKind(s,
                  "let f (x : Two) : Two where\n"
                  "  f x by case x {\n"
                  "    f a => b ;\n"
                  "    f a => a ;\n"
                  "    f b => a\n"
                  "  }\n") == "OverlappingClauses");
  CHECK(errorKind(s,
                  "let f (x : Two) : Two where\n"
                  "  f x by case x {\n"
                  "    f a => b ;\n"
                  "    f zero => a\n"
                  "  }\n") == "PatternHeadMismatch");
  CHECK(errorKind(s,
                  "let f (x : Two -> Two) : Two where\n"
                  "  f x by case x {\n"
                  "    f a => b\n"
                  "  }\n") == "UnsupportedScrutinee");
  CHECK(errorKind(s,
                  "let f (n : Nat) (x : Vec Two n) : Nat where\n"
                  "  f n x by case x {\n"
                  "    f n vnil => zero\n"
                  "  }\n") == "UnsupportedScrutinee");
  CHECK(errorKind(s,
                  "let f (x : Two) : Two where\n"
                  "  f x by case y {\n"
                  "    f a => b\n"
                  "  }\n") == "UnboundName");
  CHECK(errorKind(s,
                  "let f (x : Two) : Two where\n"
                  "  f x => f x\n") == "UnjustifiedCall");
  CHECK(errorKind(s,
                  "let plus (x : Two) : Two where\n"
                  "  plus x => x\n") == "DuplicateName");
}

TEST_CASE("a scrutinee must occur in the goal") {
  Session s = loaded({"prelude.idt"});
  Elab el(s.scope());
  Ctx root(&s.scope().g);
  V nat = dataTypeV(s.scope(), "Nat", {});
  Ctx ctx = root.extend("x", nat);
  try {
    ewmRestricted(el, ctx, false, "x", nat, {});
    FAIL("expected an error");
  } catch (const ElabError& e) {
    CHECK(e.kind == EErr::ScrutineeNotFree);
  }
  V goal = vmk(K::LabelTy, {nat, ctx.eval(var(0)), nat}, "f");
  EwmPlan p = ewmRestricted(el, ctx, true, "x", goal, {});
  REQUIRE(p.branches.size() == 2);
  CHECK(p.branches[0].tag == "zero");
  CHECK(p.branches[1].arity() == 1);
  CHECK(p.branches[1].hyp == std::vector<bool>{false, true});
}

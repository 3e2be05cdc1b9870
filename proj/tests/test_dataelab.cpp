#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "idt/labels.hpp"
#include "support.hpp"

using namespace idt;
using idt::test::corpus;
using idt::test::errorKind;
using idt::test::loaded;
using idt::test::readFile;

namespace {

std::string golden(const std::string& d) {
  std::string s = readFile(corpus("golden/" + d + ".code"));
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

/** A datatype with `depth` Bool indices, each split by a nested by block. */
std::string nested(int depth) {
  std::string s = "data Deep";
  for (int i = 0; i < depth; ++i) s += " [n" + std::to_string(i) + " : Bool]";
  s += " : Set where\n";
  std::vector<std::string> fixed;
  auto pat = [&](const std::vector<std::string>& args) {
    std::string p = "Deep";
    for (auto& a : args) p += " [" + a + "]";
    return p;
  };
  for (int k = 0; k < depth; ++k) {
    std::vector<std::string> here = fixed, off = fixed;
    off.push_back("false");
    for (int i = k; i < depth; ++i) here.push_back("n" + std::to_string(i));
    for (int i = k + 1; i < depth; ++i) off.push_back("n" + std::to_string(i));
    s += std::string(2 * (k + 1), ' ') + pat(here) + " by case n" + std::to_string(k) + "\n";
    s += std::string(2 * (k + 2), ' ') + pat(off) + " => c" + std::to_string(k) + "\n";
    fixed.push_back("true");
  }
  s += std::string(2 * (depth + 1), ' ') + pat(fixed) + " => last\n";
  return s;
}

}  // namespace

TEST_CASE("codes of the corpus datatypes") {
  Session s = loaded({"prelude.idt", "families.idt"});
  for (auto d : {"Nat", "Tree", "Vec", "Vect"}) {
    CAPTURE(d);
    CHECK(s.codeDump(d) == golden(d));
  }
  CHECK(s.codeDump("Bool") == "'sigma {false,true} [false -> '1, true -> '1]");
}

TEST_CASE("datatype metadata") {
  Session s = loaded({"prelude.idt", "families.idt"});
  const DataInfo& vec = s.scope().data.at("Vec");
  CHECK(vec.paramNames == std::vector<std::string>{"A"});
  CHECK(vec.indexNames == std::vector<std::string>{"n"});
  CHECK(vec.tags == std::vector<std::string>{"vnil", "vcons"});
  CHECK_FALSE(vec.unindexed());
  CHECK(s.scope().data.at("Tree").argNames.at("node") == std::vector<std::string>{"l", "a", "r"});
  CHECK(s.scope().ctorOwner.at("vnil") == "Vec");
  CHECK(s.scope().data.at("Nat").derived == std::vector<std::string>{"Eq"});
}

TEST_CASE("function-typed arguments are strictly positive") {
  Session s = loaded({"prelude.idt"});
  CHECK(idt::test::declare(s,
                           "data Ord : Set where\n"
                           "  Ord => oz\n"
                           "  Ord => olim (f : Nat -> Ord)\n")
            .empty());
  CHECK(s.codeDump("Ord") == "'sigma {oz,olim} [oz -> '1, olim -> 'Pi Nat (\\_. 'var) '* '1]");
  CHECK(s.evalExpr("rec_Ord (olim (\\n. oz)) (\\_. Nat) 0 (\\f h. suc (h 3))") == "1");
}

TEST_CASE("declaration errors") {
  Session s = loaded({"prelude.idt", "families.idt"});
  CHECK(errorKind(s, readFile(corpus("bad.idt"))) == "NonPositive");
  CHECK(errorKind(s,
                  "data D : Set where\n"
                  "  D => a (f : (D -> Nat) -> D)\n") == "NonPositive");
  CHECK(errorKind(s,
                  "data D : Set where\n"
                  "  D => a\n"
                  "  D => a\n") == "DuplicateConstructor");
  CHECK(errorKind(s,
                  "data Nat : Set where\n"
                  "  Nat => z\n") == "DuplicateName");
  CHECK(errorKind(s,
                  "data D [n : Nat] [v : Vec Bool n] : Set where\n"
                  "  D [n] [v] => d\n") == "DependentIndex");
  CHECK(errorKind(s,
                  "data D [n : Nat] : Set where\n"
                  "  D [n] by case n\n"
                  "    D [zero] => a\n"
                  "    D [suc m] => b\n"
                  "  D [n] => c\n") == "ClausesAfterBy");
  CHECK(errorKind(s,
                  "data D (A : Set) : Set where\n"
                  "  D A => a (x : D Bool)\n") == "PatternHeadMismatch");
  CHECK(errorKind(s,
                  "data D [n : Nat] : Set where\n"
                  "  D [n] by case n\n"
                  "    D [zero] => a\n"
                  "    D [true] => b\n") == "PatternHeadMismatch");
}

TEST_CASE("an omitted branch has no constructors") {
  Session s = loaded({"prelude.idt"});
  CHECK(idt::test::declare(s,
                           "data Z [n : Nat] : Set where\n"
                           "  Z [n] by case n\n"
                           "    Z [zero] => z\n")
            .empty());
  CHECK(s.codeDump("Z") ==
        "'sigma {elim} [elim -> call <Z [n]> (elim_Nat n (\\n. <Z [n]>) (return {z} [z -> '1]) (\\_. return {} []))]");
}

TEST_CASE("by blocks nest up to the limit") {
  Session s = loaded({"prelude.idt"});
  CHECK(errorKind(s, nested(kMaxByDepth)) == "");
  Session t = loaded({"prelude.idt"});
  CHECK(errorKind(t, nested(kMaxByDepth + 1)) == "NestingTooDeep");
}

TEST_CASE("the trace records each judgment") {
  Session s = loaded({"prelude.idt"});
  TraceNode root;
  DataOptions o;
  o.trace = &root;
  auto ds = parseFile(readFile(corpus("families.idt")));
  elabData(s.scope(), std::get<DataDecl>(ds[1]), o);
  CHECK(root.judgment == "ElabData");
  CHECK(root.input == "Vec");
  REQUIRE(root.children.size() == 2);
  CHECK(root.children[0].judgment == "ElabIndices");
  CHECK(root.children[0].output == "Unit * Nat");
  std::string text = renderTrace(root);
  for (auto j : {"ElabIndices", "ElabDataPatts", "ElabChoices", "ElabConstr vcons", "ElabArg", "ElabRecArgs", "ElabEqs"})
    CHECK(text.find(j) != std::string::npos);
  CHECK(text.find("n == suc m") != std::string::npos);
}

TEST_CASE("a failed declaration leaves the scope unchanged") {
  Session s = loaded({"prelude.idt"});
  CHECK(idt::test::declare(s, "data Ok : Set where\n  Ok => ok\n").empty());
  std::vector<std::string> globals = s.scope().g.order;
  std::vector<std::string> data = s.scope().dataOrder;
  CHECK(errorKind(s,
                  "data D : Set where\n"
                  "  D => d\n"
                  "  D => d\n") == "DuplicateConstructor");
  CHECK(errorKind(s,
                  "data E : Set where\n"
                  "  E => e\n"
                  "deriving Nope\n") == "UnknownProperty");
  CHECK(s.scope().g.order == globals);
  CHECK(s.scope().dataOrder == data);
  CHECK(s.scope().ctorOwner.count("d") == 0);
  CHECK(s.scope().ctorOwner.count("e") == 0);
  CHECK(s.scope().g.find("elim_E") == nullptr);
}

TEST_CASE("eliminators compute") {
  Session s = loaded({"prelude.idt", "families.idt"});
  CHECK(s.evalExpr("rec_Nat 3 (\\_. Nat) zero (\\n r. suc (suc r))") == "6");
  CHECK(s.evalExpr("elim_Nat 3 (\\_. Nat) 7 (\\n. n)") == "2");
  CHECK(s.evalExpr("elim_Bool true (\\_. Nat) 1 2") == "2");
  CHECK(s.evalExpr("rec_Tree Bool (node leaf true (node leaf false leaf)) (\\_. Nat) 0 "
                   "(\\l hl a r hr. suc (plus hl hr))") == "2");
  CHECK(s.typeOf("rec_Tree") ==
        "(A : Set) -> (x : Tree A) -> (P : Tree A -> Set1) -> P leaf -> ((l : Tree A) -> P l -> (a : A) -> "
        "(r : Tree A) -> P r -> P (node l a r)) -> P x");
  CHECK(s.scope().g.find("elim_Vec") == nullptr);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace idt;
using idt::test::caseAndInduction;
using idt::test::CodeDomain;
using idt::test::CodeEnumerator;
using idt::test::corpus;
using idt::test::errorKind;
using idt::test::loaded;
using idt::test::natTerm;
using idt::test::readFile;
using idt::test::termOf;
using idt::test::treeTerms;
using idt::test::valueOf;

namespace {

Session prelude() { return loaded({"prelude.idt", "families.idt"}); }

std::vector<std::string> natTerms(int n) {
  std::vector<std::string> out;
  for (int i = 0; i <= n; ++i) out.push_back(natTerm(i));
  return out;
}

TermP fstOf(TermP d) { return mk(K::Fst, {d}); }
TermP inOf(TermP d) { return mk(K::In, {d}); }

std::string normal(Session& s, const std::string& src) { return s.evalExpr(src); }

}  // namespace

TEST_CASE("case analysis computes by its constructor") {
  Session s = prelude();
  CHECK(normal(s, "case_Nat (\\_. Nat) (\\d. 5) 3") == "5");
  CHECK(normal(s, "(\\n. case_Nat (\\_. Nat) (\\d. 5) (suc n) : Nat -> Nat)") == "\\_. 5");
  CHECK(normal(s, "(\\n. case_Nat (\\_. Nat) (\\d. 5) n : Nat -> Nat)").find("iinduction") != std::string::npos);
}

TEST_CASE("case agrees with induction on the corpus datatypes") {
  Session s = prelude();
  struct Subject {
    std::string d;
    std::vector<TermP> ps;
    std::vector<std::string> xs;
  };
  std::vector<Subject> subjects{
      {"Nat", {}, natTerms(4)},
      {"Bool", {}, {"false", "true"}},
      {"Tree", {cnst("Bool")}, treeTerms(2)},
      {"Tree", {unit()}, treeTerms(3, {"()"}, "Tree Unit")},
  };
  int n = 0;
  for (auto& sub : subjects) {
    const DataInfo& di = s.scope().data.at(sub.d);
    TermP tags = mk(K::EnumT, {enumLit(di.tags)});
    TermP D = apps(cnst(sub.d), sub.ps);
    for (auto& src : sub.xs) {
      CAPTURE(src);
      TermP x = termOf(s, src);
      auto [c1, i1] = caseAndInduction(s, sub.d, sub.ps, tags, fstOf, x);
      CHECK(alphaEq(c1, i1));
      CHECK((c1->k == K::ZeroE || c1->k == K::SucE));
      auto [c2, i2] = caseAndInduction(s, sub.d, sub.ps, D, inOf, x);
      CHECK(alphaEq(c2, i2));
      CHECK(alphaEq(c2, normalize(Ctx(&s.scope().g), x)));
      ++n;
    }
  }
  CHECK(n == 5 + 2 + 19 + 26);
}

TEST_CASE("case on a depth-2 tree picks the node branch") {
  Session s = prelude();
  TermP tags = mk(K::EnumT, {enumLit({"leaf", "node"})});
  TermP x = termOf(s, "(node (node leaf true leaf) false leaf : Tree Bool)");
  auto [c, i] = caseAndInduction(s, "Tree", {cnst("Bool")}, tags, fstOf, x);
  CHECK(alphaEq(c, numeral(1)));
  CHECK(normal(s, "elim_Tree Bool (node (node leaf true leaf) false leaf) (\\_. Bool) false (\\l a r. a)") == "false");
}

TEST_CASE("NoConfusion normal forms") {
  Session s = prelude();
  CHECK(normal(s, "NoConfusion_Tree Bool leaf (node leaf true leaf)") == "(P : Set) -> P");
  CHECK(normal(s, "NoConfusion_Tree Bool leaf leaf") == "(P : Set) -> (Eq Unit () () -> P) -> P");
  CHECK(normal(s, "NoConfusion_Nat 2 1") == "(P : Set) -> (Eq (Nat * Unit) (1, ()) (0, ()) -> P) -> P");
  CHECK(normal(s, "NoConfusion_Nat 0 1") == "(P : Set) -> P");
  CHECK(normal(s, "NoConfusion_Nat 1 0") == "(P : Set) -> P");
}

TEST_CASE("NoConfusion separates every constructor pair") {
  Session s = prelude();
  struct Subject {
    std::string d;
    std::vector<std::pair<std::string, std::string>> samples;  // tag, inhabitant
    std::string ps;
  };
  std::vector<Subject> subjects{
      {"Nat", {{"zero", "0"}, {"suc", "1"}, {"suc", "3"}}, ""},
      {"Bool", {{"false", "false"}, {"true", "true"}}, ""},
      {"Tree", {{"leaf", "leaf"}, {"node", "(node leaf true leaf)"}, {"node", "(node leaf false (node leaf true leaf))"}}, "Bool "},
  };
  for (auto& sub : subjects)
    for (auto& [t1, x] : sub.samples)
      for (auto& [t2, y] : sub.samples) {
        std::string src = "NoConfusion_" + sub.d + " " + sub.ps + x + " " + y;
        CAPTURE(src);
        std::string nf = normal(s, src);
        if (t1 == t2) {
          CHECK(nf.rfind("(P : Set) -> (", 0) == 0);
          CHECK(nf.find(" -> P) -> P") != std::string::npos);
        } else {
          CHECK(nf == "(P : Set) -> P");
        }
      }
}

TEST_CASE("noConfusion at equal constructors returns its continuation applied to refl") {
  Session s = prelude();
  CHECK(normal(s, "noConfusion_Nat 2 2 refl") == "\\_ f. f refl");
  CHECK(normal(s, "noConfusion_Nat 2 2 refl Nat (\\q. 7)") == "7");
  CHECK(normal(s, "noConfusion_Tree Bool leaf leaf refl Bool (\\q. true)") == "true");
  CHECK(s.typeOf("noConfusion_Nat 0 0 refl") == "(P : Set) -> (Eq Unit () () -> P) -> P");
}

TEST_CASE("generated entries pass a fresh kernel check") {
  Session s = prelude();
  for (auto n : {"case_Nat", "NoConfusion_Nat", "noConfusion_Nat", "case_Tree", "NoConfusion_Tree", "noConfusion_Tree"})
    CHECK(s.scope().g.find(n) != nullptr);
  CHECK_NOTHROW(s.recheckFromScratch());
}

TEST_CASE("an untagged datatype has no case analysis") {
  Session s = prelude();
  Scope& sc = s.scope();
  TermP R = lam("_", mk(K::DOne));
  addGlobal(sc.g, "Solo", set(0), mk(K::IMu, {unit(), R, tt()}));
  DataInfo di;
  di.name = "Solo";
  di.type = set(0);
  di.code = mk(K::DOne);
  sc.data["Solo"] = di;
  try {
    deriveCase(sc, "Solo");
    FAIL("expected NotTagged");
  } catch (const ElabError& e) {
    CHECK(e.kind == EErr::NotTagged);
  }
  CHECK_THROWS_AS(specializeNoConfusion(sc, "Solo"), ElabError);
}

TEST_CASE("enumeration equality agrees with numeral comparison") {
  for (int size = 1; size <= 6; ++size) {
    std::vector<std::string> tags;
    for (int k = 0; k < size; ++k) tags.push_back("t" + std::to_string(k));
    V E = eval(Env{}, enumLit(tags));
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        CHECK((decideEqEnum(E, numeralV(i), numeralV(j)) == Decision::Equal) == (i == j));
  }
}

TEST_CASE("membership agrees with the sub-universe predicate") {
  Session s = prelude();
  CHECK(idt::test::declare(s, "data Plain : Set where\n  Plain => p\n").empty());
  std::vector<CodeDomain> doms{
      {vunit(), true},
      {eval(Env{}, mk(K::EnumT, {enumLit({"a", "b"})})), true},
      {valueOf(s, "(Nat : Set)"), true},
      {vvar(0), true},
      {valueOf(s, "(Plain : Set)"), false},
      {valueOf(s, "(Nat -> Nat : Set)"), false},
      {vset(0), false},
  };
  CodeEnumerator gen(doms);
  auto codes = gen.upTo(5);
  CHECK(codes.size() > 10000);
  size_t accepted = 0;
  for (auto& c : codes) {
    Membership m = eqMembership(s.scope(), c.code, 1);
    bool sub = eqSubDesc(s.scope(), c.code, 1);
    CHECK(m.witness.has_value() == c.eq);
    CHECK(sub == c.eq);
    if (!m.witness) CHECK_FALSE(m.reason.empty());
    if (c.pi) CHECK_FALSE(m.witness.has_value());
    if (c.eq) ++accepted;
  }
  CHECK(accepted > 0);
  CHECK(accepted < codes.size());
}

TEST_CASE("function fields are refused with a reason") {
  Session s = prelude();
  V natV = valueOf(s, "(Nat : Set)");
  V pi = vmk(K::DPi, {natV, vlam("_", [](V) { return vmk(K::DVarI, {vtt()}); })});
  Membership m = eqMembership(s.scope(), pi);
  CHECK_FALSE(m.witness);
  CHECK(m.reason.find("'Pi") != std::string::npos);
  Membership one = eqMembership(s.scope(), vmk(K::DOne));
  REQUIRE(one.witness);
  CHECK(one.witness->kind == EqWitness::One);
  DataView nat = viewData(s.scope(), "Nat", {});
  Membership mn = eqMembership(s.scope(), nat.code);
  REQUIRE(mn.witness);
  CHECK(mn.witness->kind == EqWitness::Choice);
  CHECK(mn.witness->tags == std::vector<std::string>{"zero", "suc"});
}

TEST_CASE("derived equality on Nat agrees with the structural oracle") {
  Session s = prelude();
  EqProc eq = deriveEq(s.scope(), "Nat", {});
  std::vector<V> vs;
  for (int i = 0; i <= 6; ++i) vs.push_back(valueOf(s, "(" + natTerm(i) + " : Nat)"));
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = 0; j < vs.size(); ++j) CHECK((eq(vs[i], vs[j]) == Decision::Equal) == (i == j));
}

TEST_CASE("derived equality on Tree Bool agrees with the structural oracle") {
  Session s = prelude();
  EqProc eq = deriveEq(s.scope(), "Tree", {valueOf(s, "(Bool : Set)")});
  auto ts = treeTerms(3);
  REQUIRE(ts.size() == 723);
  std::vector<V> vs;
  std::vector<TermP> canon;
  Ctx ctx(&s.scope().g);
  for (auto& t : ts) {
    vs.push_back(valueOf(s, t));
    canon.push_back(ctx.quote(vs.back()));
  }
  size_t wrong = 0, repeats = 0;
  auto compare = [&](size_t i, size_t j) {
    bool oracle = alphaEq(canon[i], canon[j]);
    if (oracle != (i == j)) ++repeats;
    if ((eq(vs[i], vs[j]) == Decision::Equal) != oracle) ++wrong;
  };
  // The acceptance run covers every pair; here the diagonal plus a sample.
  idt::test::Rng r(17);
  for (size_t i = 0; i < vs.size(); ++i) {
    compare(i, i);
    for (int k = 0; k < 20; ++k) compare(i, static_cast<size_t>(r.below(static_cast<int>(vs.size()))));
  }
  CHECK(repeats == 0);
  CHECK(wrong == 0);
}

TEST_CASE(":eq dispatches to the derived procedure") {
  Session s = prelude();
  CHECK(s.decideEq("2 2") == "equal");
  CHECK(s.decideEq("2 3") == "not equal");
  CHECK(s.decideEq("(node leaf true leaf : Tree Bool) (node leaf true leaf)") == "equal");
  CHECK(s.decideEq("(node leaf true leaf : Tree Bool) (node leaf false leaf)") == "not equal");
  CHECK(idt::test::declare(s, "data Plain : Set where\n  Plain => p\n").empty());
  CHECK_THROWS_AS(s.decideEq("(p : Plain) p"), ElabError);
}

TEST_CASE("deriving errors are reported at the declaration") {
  Session s = prelude();
  std::string rose = readFile(corpus("rose.idt"));
  CHECK(errorKind(s, rose) == "DerivingUnsupported");
  try {
    s.declare(parseFile(rose)[0], std::cout);
    FAIL("expected an error");
  } catch (const ElabError& e) {
    CHECK(e.span.line == 1);
    CHECK(e.span.col == 1);
    CHECK(std::string(e.what()).find("'Pi") != std::string::npos);
  }
  CHECK(errorKind(s,
                  "data V2 (A : Set) [n : Nat] : Set where\n"
                  "  V2 A [n] => v2\n"
                  "deriving Eq\n") == "DerivingUnsupported");
  CHECK(errorKind(s,
                  "data Box : Set where\n"
                  "  Box => box (f : Nat -> Nat)\n"
                  "deriving Eq\n") == "DerivingUnsupported");
  CHECK(errorKind(s,
                  "data W : Set where\n"
                  "  W => w\n"
                  "deriving Show\n") == "UnknownProperty");
}

TEST_CASE("the registry dispatches to registered properties") {
  Session s = prelude();
  DerivingRegistry& reg = s.registry();
  CHECK(reg.has("Eq"));
  CHECK_THROWS_AS(reg.get("Show"), ElabError);
  try {
    DerivableProperty again;
    again.name = "Eq";
    reg.add(again);
    FAIL("expected DuplicateProperty");
  } catch (const ElabError& e) {
    CHECK(e.kind == EErr::DuplicateProperty);
  }
  std::vector<std::string> seen;
  DerivableProperty finite;
  finite.name = "Finite";
  finite.subDesc = [](const Scope&, const V& code, int) { return code->k == K::DSigmaE; };
  finite.membership = [](const Scope&, const V& code, int) {
    Membership m;
    if (code->k == K::DSigmaE)
      m.witness = EqWitness{EqWitness::Choice, {}, nullptr, {}, {}};
    else
      m.reason = "not a choice";
    return m;
  };
  finite.derive = [&seen](Scope& sc, const std::string& d, const EqWitness&) {
    seen.push_back(d);
    sc.data.at(d).derived.push_back("Finite");
  };
  reg.add(finite);
  CHECK(reg.names() == std::vector<std::string>{"Eq", "Finite"});
  CHECK(errorKind(s,
                  "data Three : Set where\n"
                  "  Three => one\n"
                  "  Three => two\n"
                  "  Three => three\n"
                  "deriving Finite\n") == "");
  CHECK(seen == std::vector<std::string>{"Three"});
  CHECK(s.scope().data.at("Three").derived == std::vector<std::string>{"Finite"});
}

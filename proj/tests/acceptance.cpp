// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <cstdio>
#include <deque>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "support.hpp"

using namespace idt;
using namespace idt::test;

namespace {

class Criterion {
 public:
  Criterion(int n, std::string title) : n_(n), title_(std::move(title)) {}

  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failed_;
    if (details_.size() < 8) details_.push_back(what);
  }

  template <class F>
  void run(F f) {
    try {
      f(*this);
    } catch (const std::exception& e) {
      expect(false, std::string("uncaught: ") + e.what());
    }
  }

  bool report() const {
    bool ok = failed_ == 0 && checks_ > 0;
    std::printf("%s %d %s (%zu checks, %zu failed)\n", ok ? "PASS" : "FAIL", n_, title_.c_str(), checks_, failed_);
    for (auto& d : details_) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    return ok;
  }

 private:
  int n_;
  std::string title_;
  size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> details_;
};

std::string golden(const std::string& d) {
  std::string s = readFile(corpus("golden/" + d + ".code"));
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

template <class F>
std::string failureOf(F f) {
  try {
    f();
  } catch (const ElabError& e) {
    return errName(e.kind);
  } catch (const KernelError& e) {
    return std::string("kernel: ") + e.what();
  }
  return "";
}

bool mentions(const TermP& t, K k) {
  if (t->k == k) return true;
  for (auto& c : t->a)
    if (mentions(c, k)) return true;
  return false;
}

// Codes written with the last field of a constructor unterminated, as in `'var` for
// the successor, become codes whose every constructor ends in '1.
ExtP terminated(const ExtP& e) {
  auto close = [](const ExtP& x) { return emk(EK::Times, {x, evar("'1")}); };
  if (e->k == EK::Var && e->s == "'var") return close(e);
  if (e->k == EK::Times) return emk(EK::Times, {e->a[0], terminated(e->a[1])});
  if (e->k != EK::App) return e;
  std::deque<ExtP> args;
  ExtP f = e;
  while (f->k == EK::App) {
    args.push_front(f->a[1]);
    f = f->a[0];
  }
  if (f->k != EK::Var) return e;
  if (f->s == "'varI") return close(e);
  if (f->s == "'Sigma" && args.size() == 2 && args[1]->k == EK::Lam) {
    auto body = std::make_shared<Ext>(*args[1]);
    body->a[0] = terminated(args[1]->a[0]);
    return eapp(eapp(f, args[0]), body);
  }
  if ((f->s == "'sigma" || f->s == "return") && args.size() == 2 && args[1]->k == EK::ElimLit) {
    auto branches = std::make_shared<Ext>(*args[1]);
    for (auto& b : branches->a) b = terminated(b);
    return eapp(eapp(f, args[0]), branches);
  }
  return e;
}

// 1 ----------------------------------------------------------------------------------

void codes(Criterion& c) {
  Session s = loaded({"nat_tree_vec.idt"});
  for (auto d : {"Nat", "Tree", "Vec", "Vect"}) c.expect(s.codeDump(d) == golden(d), std::string(d) + ": dump differs from golden");

  Ctx root(&s.scope().g);
  Ctx withA = root.extend("A", vset(0));
  Ctx withN = withA.extend("n", root.eval(cnst("Nat")));
  // Unindexed datatypes are coded over the unit index.
  V idescUnit = vmk(K::IDesc, {vunit()});
  V idescNat = vmk(K::IDesc, {root.eval(sigma("_", unit(), cnst("Nat")))});
  auto hand = [&](const Ctx& ctx, const ExtP& e, const V& T) { return elabCheck(s.scope(), ctx, e, T, true); };
  auto code = [&](const std::string& d) { return s.scope().data.at(d).code; };

  // Binary trees written both ways; closing the last fields relates them.
  ExtP treeOpen = parseTerm("'sigma {leaf,node} [leaf -> '1, node -> 'var '* 'Sigma A (\\_. 'var)]");
  ExtP treeClosed = parseTerm("'sigma {leaf,node} [leaf -> '1, node -> 'var '* 'Sigma A (\\_. 'var '* '1)]");
  TermP open = hand(withA, treeOpen, idescUnit);
  TermP closed = hand(withA, treeClosed, idescUnit);
  c.expect(!defEq(withA, open, closed), "Tree: open and closed codes should differ");
  c.expect(defEq(withA, hand(withA, terminated(treeOpen), idescUnit), closed), "Tree: closing the open code gives the closed one");
  c.expect(defEq(withA, closed, code("Tree")), "Tree: elaborated code differs from the hand code");

  // call/return cancel on the labelled form.
  TermP labelled = hand(withA,
                        parseTerm("call <Tree A> (return {leaf,node} [leaf -> '1, node -> 'var '* 'Sigma A (\\_. 'var '* '1)])"),
                        idescUnit);
  TermP plain = hand(withA, treeClosed, idescUnit);
  c.expect(defEq(withA, labelled, plain), "Tree: call/return does not reduce");

  ExtP natOpen = parseTerm("'sigma {zero,suc} [zero -> '1, suc -> 'var]");
  c.expect(defEq(root, hand(root, terminated(natOpen), idescUnit), code("Nat")), "Nat: elaborated code differs from the hand code");

  TermP vec = hand(withN,
                   parseTerm("call <Vec A [n]> (return {vnil,vcons} [vnil -> 'Sigma (n == zero) (\\_. '1), "
                             "vcons -> 'Sigma Nat (\\m. 'Sigma A (\\_. 'varI ((), m) '* 'Sigma (n == suc m) (\\_. '1)))])"),
                   idescNat);
  c.expect(defEq(withN, vec, code("Vec")), "Vec: elaborated code differs from the hand code");

  TermP vect = hand(withN,
                    parseTerm("call <Vect A [n]> (return {elim} [elim -> call <Vect A [n]> (elim_Nat n (\\n. <Vect A [n]>) "
                              "(return {vnil} [vnil -> '1]) "
                              "(\\m. return {vcons} [vcons -> 'Sigma A (\\_. 'varI ((), m) '* '1)]))])"),
                    idescNat);
  c.expect(defEq(withN, vect, code("Vect")), "Vect: elaborated code differs from the hand code");
  c.expect(!defEq(withN, vec, vect), "Vec and Vect codes should differ");
}

// 2 ----------------------------------------------------------------------------------

void soundness(Criterion& c) {
  Session s = loaded({"prelude.idt", "families.idt"});
  c.expect(failureOf([&] { s.recheckFromScratch(); }).empty(), "corpus: recheck from scratch failed");
  Session t = loaded({"nat_tree_vec.idt"});
  c.expect(failureOf([&] { t.recheckFromScratch(); }).empty(), "nat_tree_vec: recheck from scratch failed");

  Ctx ctx(&s.scope().g);
  TermGen terms(101);
  for (int i = 0; i < 500; ++i) {
    std::string src = terms.top(terms.anyTy(), 6);
    std::string f = failureOf([&] {
      auto [tm, T] = elabSynth(s.scope(), ctx, parseTerm(src), true);
      check(ctx, tm, T);
    });
    c.expect(f.empty(), "term " + src + ": " + f);
  }

  DeclGen decls(202);
  for (int batch = 0; batch < 4; ++batch) {
    Session u = loaded({"prelude.idt"});
    for (int i = 0; i < 25; ++i) {
      GenDecl d = decls.next("G" + std::to_string(i));
      std::string got = errorKind(u, d.text);
      c.expect(got == d.expect, "declaration gave '" + got + "', expected '" + d.expect + "':\n" + d.text);
    }
    c.expect(failureOf([&] { u.recheckFromScratch(); }).empty(), "generated declarations: recheck from scratch failed");
  }
}

// 3 ----------------------------------------------------------------------------------

void positivity(Criterion& c) {
  Session s = loaded({"prelude.idt"});
  c.expect(errorKind(s, readFile(corpus("bad.idt"))) == "NonPositive", "Bad is not rejected as NonPositive");
  Session fresh;
  std::ostringstream out, err;
  c.expect(fresh.loadFiles({corpus("bad.idt")}, out, err) == Status::ElabFailed, "loading Bad does not fail");
  c.expect(err.str().find("error[NonPositive]") != std::string::npos, "diagnostic for Bad lacks NonPositive");
  for (auto files : std::vector<std::vector<std::string>>{{"prelude.idt", "families.idt"}, {"nat_tree_vec.idt"}}) {
    Session ok;
    std::ostringstream o, e;
    std::vector<std::string> paths;
    for (auto& f : files) paths.push_back(corpus(f));
    c.expect(ok.loadFiles(paths, o, e) == Status::Ok, "corpus rejected: " + e.str());
  }
}

// 4 ----------------------------------------------------------------------------------

void addition(Criterion& c) {
  Session s = loaded({"prelude.idt"});
  Ctx ctx(&s.scope().g);
  for (int m = 0; m <= 10; ++m)
    for (int n = 0; n <= 10; ++n) {
      std::string src = "plus " + natTerm(m) + " " + natTerm(n);
      c.expect(s.evalExpr(src) == std::to_string(m + n), src + " does not print " + std::to_string(m + n));
      TermP sum = normalize(ctx, termOf(s, src));
      c.expect(alphaEq(sum, normalize(ctx, termOf(s, "(" + natTerm(m + n) + " : Nat)"))), src + " is not the numeral");
    }
}

// 5 ----------------------------------------------------------------------------------

void sugar(Criterion& c) {
  Session s = loaded({"prelude.idt", "families.idt"});
  Ctx ctx(&s.scope().g);
  for (auto src : {"(vcons zero true vnil : Vec Bool (suc zero))", "(vcons true vnil : Vect Bool (suc zero))"}) {
    std::string f = failureOf([&] {
      auto [t, T] = elabSynth(s.scope(), ctx, parseTerm(src), true);
      check(ctx, t, T);
      c.expect(defEq(ctx, ctx.quote(T), termOf(s, std::string(src).find("Vect") != std::string::npos
                                                    ? "(Vect Bool (suc zero) : Set)"
                                                    : "(Vec Bool (suc zero) : Set)")),
               std::string(src) + ": wrong type");
      if (std::string(src).find("Vect") == std::string::npos)
        c.expect(mentions(t, K::Refl), std::string(src) + ": equality slots are not filled with refl");
    });
    c.expect(f.empty(), std::string(src) + ": " + f);
  }
  for (auto src : {"(vnil : Vec Bool (suc zero))", "(vnil : Vect Bool (suc zero))"}) {
    std::string f = failureOf([&] { elabSynth(s.scope(), ctx, parseTerm(src), true); });
    c.expect(!f.empty() && f.rfind("kernel", 0) != 0, std::string(src) + " should fail to elaborate");
  }
}

// 6 ----------------------------------------------------------------------------------

TermP fstOf(TermP d) { return mk(K::Fst, {d}); }
TermP inOf(TermP d) { return mk(K::In, {d}); }

void generics(Criterion& c) {
  Session s = loaded({"prelude.idt", "families.idt"});
  Ctx ctx(&s.scope().g);

  // (a) case agrees with induction.
  struct Subject {
    std::string d;
    std::vector<TermP> ps;
    std::vector<std::string> xs;
  };
  std::vector<std::string> nats;
  for (int i = 0; i <= 4; ++i) nats.push_back("(" + natTerm(i) + " : Nat)");
  std::vector<Subject> subjects{
      {"Nat", {}, nats},
      {"Bool", {}, {"(false : Bool)", "(true : Bool)"}},
      {"Tree", {cnst("Bool")}, treeTerms(3)},
      {"Tree", {unit()}, treeTerms(4, {"()"}, "Tree Unit")},
  };
  for (auto& sub : subjects) {
    const DataInfo& di = s.scope().data.at(sub.d);
    TermP tags = mk(K::EnumT, {enumLit(di.tags)});
    TermP D = apps(cnst(sub.d), sub.ps);
    for (auto& src : sub.xs) {
      std::string f = failureOf([&] {
        TermP x = termOf(s, src);
        auto [c1, i1] = caseAndInduction(s, sub.d, sub.ps, tags, fstOf, x);
        c.expect(alphaEq(c1, i1), "case/induction disagree on the tag of " + src);
        auto [c2, i2] = caseAndInduction(s, sub.d, sub.ps, D, inOf, x);
        c.expect(alphaEq(c2, i2) && alphaEq(c2, normalize(ctx, x)), "case/induction disagree on " + src);
      });
      c.expect(f.empty(), src + ": " + f);
    }
  }

  // (b) NoConfusion.
  for (auto n : {"NoConfusion_Nat", "noConfusion_Nat", "NoConfusion_Tree", "noConfusion_Tree"}) {
    const Global* g = s.scope().g.find(n);
    c.expect(g != nullptr, std::string(n) + " is missing");
    if (!g) continue;
    c.expect(failureOf([&] {
               checkType(ctx, g->type);
               check(ctx, g->term, g->vtype);
             }).empty(),
             std::string(n) + " does not kernel-check");
  }
  struct Samples {
    std::string d, ps;
    std::vector<std::pair<std::string, std::string>> xs;  // tag, inhabitant
  };
  std::vector<Samples> samples{
      {"Nat", "", {{"zero", "0"}, {"suc", "1"}, {"suc", "2"}, {"suc", "5"}}},
      {"Tree",
       "Bool ",
       {{"leaf", "leaf"}, {"node", "(node leaf true leaf)"}, {"node", "(node leaf false leaf)"},
        {"node", "(node (node leaf true leaf) false leaf)"}}},
  };
  for (auto& sm : samples)
    for (auto& [t1, x] : sm.xs)
      for (auto& [t2, y] : sm.xs) {
        std::string src = "NoConfusion_" + sm.d + " " + sm.ps + x + " " + y;
        std::string nf = s.evalExpr(src);
        if (t1 != t2) {
          c.expect(nf == "(P : Set) -> P", src + " is " + nf);
        } else {
          const std::string tail = " -> P) -> P";
          bool shape = nf.rfind("(P : Set) -> (Eq ", 0) == 0 && nf.size() > tail.size() &&
                       nf.compare(nf.size() - tail.size(), tail.size(), tail) == 0;
          c.expect(shape, src + " is " + nf);
        }
      }

  // (c) derived equality against structural oracles.
  EqProc natEq = deriveEq(s.scope(), "Nat", {});
  std::vector<V> ns;
  for (int i = 0; i <= 6; ++i) ns.push_back(valueOf(s, "(" + natTerm(i) + " : Nat)"));
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 6; ++j)
      c.expect((natEq(ns[i], ns[j]) == Decision::Equal) == (i == j),
               "Nat equality wrong at " + std::to_string(i) + ", " + std::to_string(j));

  EqProc treeEq = deriveEq(s.scope(), "Tree", {valueOf(s, "(Bool : Set)")});
  auto ts = treeTerms(3);
  c.expect(ts.size() == 723, "expected 723 trees of depth at most 3");
  std::vector<V> vs;
  for (auto& t : ts) vs.push_back(valueOf(s, t));
  size_t wrong = 0;
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = 0; j < vs.size(); ++j)
      if ((treeEq(vs[i], vs[j]) == Decision::Equal) != (ts[i] == ts[j])) ++wrong;
  c.expect(wrong == 0, "Tree Bool equality wrong on " + std::to_string(wrong) + " pairs");

  // (d) 'Pi is outside the equality sub-universe.
  std::vector<CodeDomain> doms{
      {vunit(), true}, {valueOf(s, "(Nat : Set)"), true}, {vvar(0), true}, {valueOf(s, "(Nat -> Nat : Set)"), false}};
  CodeEnumerator gen(doms);
  size_t pis = 0;
  for (auto& g : gen.upTo(4)) {
    if (!g.pi) continue;
    ++pis;
    Membership m = eqMembership(s.scope(), g.code, 1);
    c.expect(!m.witness.has_value(), "a code with 'Pi was accepted");
  }
  c.expect(pis > 100, "too few codes with 'Pi");
  Session r = loaded({"prelude.idt"});
  std::ostringstream out, err;
  c.expect(r.loadFiles({corpus("rose.idt")}, out, err) == Status::ElabFailed, "rose.idt is accepted");
  c.expect(err.str().rfind(corpus("rose.idt") + ":1:1: ", 0) == 0, "DerivingUnsupported is not at the declaration: " + err.str());
  c.expect(err.str().find("error[DerivingUnsupported]") != std::string::npos, "rose.idt: wrong error: " + err.str());
}

// 7 ----------------------------------------------------------------------------------

void roundtrips(Criterion& c) {
  Session s = loaded({"prelude.idt", "families.idt"});
  Ctx ctx(&s.scope().g);
  TermGen terms(303);
  for (int i = 0; i < 1000; ++i) {
    std::string src = terms.top(terms.anyTy(), 6);
    ExtP e = parseTerm(src);
    c.expect(extEq(parseTerm(printExt(e)), e), "parse/print: " + src);
    auto [t, T] = elabSynth(s.scope(), ctx, e, false);
    TermP nf = normalize(ctx, t);
    c.expect(alphaEq(normalize(ctx, nf), nf), "normalization is not idempotent: " + src);
    c.expect(alphaEq(ctx.quote(ctx.eval(nf)), nf), "readback of eval differs: " + src);
  }
  for (auto f : {"prelude.idt", "families.idt", "nat_tree_vec.idt", "rose.idt", "bad.idt"}) {
    auto ds = parseFile(readFile(corpus(f)));
    std::string printed = printFile(ds);
    auto again = parseFile(printed);
    bool same = ds.size() == again.size();
    for (size_t i = 0; same && i < ds.size(); ++i) same = declEq(ds[i], again[i]);
    c.expect(same, std::string(f) + ": parse/print roundtrip");
    c.expect(printFile(again) == printed, std::string(f) + ": printing is not stable");
  }
  DeclGen decls(404);
  for (int i = 0; i < 300; ++i) {
    GenDecl d = decls.next("G" + std::to_string(i));
    auto ds = parseFile(d.text);
    auto again = parseFile(printFile(ds));
    c.expect(ds.size() == 1 && again.size() == 1 && declEq(ds[0], again[0]), "parse/print:\n" + d.text);
  }
}

}  // namespace

int main() {
  struct Entry {
    const char* title;
    void (*body)(Criterion&);
  };
  const Entry entries[] = {
      {"elaborated codes match the goldens and the hand-written codes", codes},
      {"elaboration output re-checks in the kernel", soundness},
      {"non-positive declarations are rejected", positivity},
      {"plus computes addition", addition},
      {"constructor sugar on families", sugar},
      {"generic case, NoConfusion and derived equality", generics},
      {"normalization and syntax roundtrips", roundtrips},
  };
  bool all = true;
  int n = 0;
  for (auto& e : entries) {
    Criterion c(++n, e.title);
    c.run(e.body);
    all = c.report() && all;
  }
  return all ? 0 : 1;
}

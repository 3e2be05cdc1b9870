#pragma once

#include <string>
#include <vector>

#include "idt/elab.hpp"

namespace idt {

/** Index type of a description label term: Unit, then `× I` per index or constraint slot. */
TermP labelIndexType(const TermP& dlabel);

/** Reduces call/return pairs syntactically and leaves everything else alone. */
TermP reduceCalls(const TermP& t);

/** Turns local `index` of `t` into the variable bound by one new binder around the result. */
TermP abstractVar(const TermP& t, int index);

/** Names of the eliminators generated for an unindexed datatype. */
inline std::string caseElimName(const std::string& d) { return "elim_" + d; }
inline std::string recElimName(const std::string& d) { return "rec_" + d; }

/** Position of `index` as a whole slot of a label value's arguments, or -1. */
int labelSlotOf(const Ctx& ctx, const V& label, int index);

struct EwmBranch {
  std::string tag;
  V method;               // Pi chain of the method's binders ending in the refined goal
  std::vector<bool> hyp;  // per binder: inductive hypothesis or constructor argument
  int arity() const;
};

struct EwmPlan {
  bool enumeration = false;
  TermP head;    // eliminator applied to parameters, scrutinee and motive
  TermP motive;
  TermP enumE;   // for enumerations
  TermP scrut;
  std::string dataName;
  std::vector<EwmBranch> branches;
};

/** Plans `case`/`rec` on local `var` against `goal` with motive `\var. goal`. */
EwmPlan ewmRestricted(Elab& el, const Ctx& ctx, bool rec, const std::string& var, const V& goal, Span sp);

struct OpenedBranch {
  Ctx ctx;
  V goal;
  std::vector<std::string> names;  // every binder, hypotheses included
};
OpenedBranch openBranch(const Ctx& ctx, const EwmBranch& b, const std::vector<std::string>& argNames);
TermP closeBranch(const OpenedBranch& ob, TermP body);
TermP assemble(const EwmPlan& p, const std::vector<TermP>& methods);

/** A pattern at the scrutinee position: constructor tag plus names for its arguments. */
struct CtorPattern {
  std::string tag;
  std::vector<std::string> names;
};
CtorPattern ctorPattern(Elab& el, const ExtP& e);

/** Elaborates `let f xs : T where prog` and adds `f := \\xs. call <f xs : T> body`. */
void elabDefine(Scope& s, const LetDecl& d, bool recheck = true);

constexpr int kMaxByDepth = 8;

}  // namespace idt

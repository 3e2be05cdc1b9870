#include "idt/labels.hpp"

#include "idt/desc.hpp"

namespace idt {

TermP labelIndexType(const TermP& l) {
  TermP acc = unit();
  size_t j = 0;
  for (char c : l->tel) {
    if (c == 'p') {
      j += 1;
    } else if (c == 'i') {
      acc = times(acc, l->a[j + 1]);
      j += 2;
    } else {
      acc = times(acc, l->a[j + 2]);
      j += 3;
    }
  }
  return acc;
}

TermP reduceCalls(const TermP& t) {
  if (t->a.empty()) return t;
  auto c = std::make_shared<Term>(*t);
  for (auto& x : c->a) x = reduceCalls(x);
  if (c->k == K::LCall && c->a[1]->k == K::LRet) return c->a[1]->a[0];
  if (c->k == K::DCall && c->a[1]->k == K::DRet) return mk(K::DSigmaE, {c->a[1]->a[0], c->a[1]->a[1]});
  return c;
}

namespace {

TermP replaceVar(const TermP& t, int from, int depth) {
  if (t->k == K::Var) {
    if (t->n == from + depth) return var(depth);
    return t;
  }
  if (t->a.empty()) return t;
  auto c = std::make_shared<Term>(*t);
  for (size_t i = 0; i < c->a.size(); ++i) c->a[i] = replaceVar(t->a[i], from, depth + bindersAt(t->k, i));
  return c;
}

std::optional<int> lookupLocal(const Ctx& ctx, const std::string& x) {
  const auto& es = ctx.entries();
  for (int i = static_cast<int>(es.size()) - 1; i >= 0; --i)
    if (es[i].name == x) return static_cast<int>(es.size()) - 1 - i;
  return std::nullopt;
}

}  // namespace

TermP abstractVar(const TermP& t, int index) { return replaceVar(shift(t, 1, 0), index + 1, 0); }

int labelSlotOf(const Ctx& ctx, const V& label, int index) {
  TermP x = var(index);
  if (label->k == K::LabelTy) {
    for (size_t i = 1, slot = 0; i + 1 < label->a.size(); i += 2, ++slot)
      if (alphaEq(ctx.quote(label->a[i]), x)) return static_cast<int>(slot);
    return -1;
  }
  if (label->k == K::DLabelTy) {
    size_t j = 0;
    int slot = 0;
    for (char c : label->tel) {
      if (c != 'c' && alphaEq(ctx.quote(label->a[j]), x)) return slot;
      j += c == 'p' ? 1 : c == 'i' ? 2 : 3;
      ++slot;
    }
  }
  return -1;
}

int EwmBranch::arity() const {
  int n = 0;
  for (bool h : hyp) n += h ? 0 : 1;
  return n;
}

EwmPlan ewmRestricted(Elab& el, const Ctx& ctx, bool rec, const std::string& x, const V& goal, Span sp) {
  auto g = el.goal([&] { return std::string(rec ? "rec" : "case") + " on " + x + " for " + el.show(ctx, goal); }, sp);
  auto idx = lookupLocal(ctx, x);
  if (!idx) el.error(EErr::UnboundName, sp, "scrutinee " + x + " is not in scope");
  TermP G = ctx.quote(goal);
  if (!mentionsVar(G, *idx))
    el.error(EErr::ScrutineeNotFree, sp, x + " does not occur in the goal " + el.show(ctx, goal));
  EwmPlan p;
  p.scrut = var(*idx);
  p.motive = lam(x, abstractVar(G, *idx));
  V P = ctx.eval(p.motive);
  const V& T = ctx.at(*idx).type;

  if (T->k == K::EnumT) {
    auto tags = enumTags(T->a[0]);
    if (!tags) el.error(EErr::UnsupportedScrutinee, sp, x + " ranges over an open enumeration " + el.show(ctx, T));
    p.enumeration = true;
    p.enumE = ctx.quote(T->a[0]);
    for (size_t k = 0; k < tags->size(); ++k)
      p.branches.push_back(EwmBranch{(*tags)[k], vapp(P, numeralV(static_cast<int>(k))), {}});
    return p;
  }
  if (T->k == K::Pi)
    el.error(EErr::UnsupportedScrutinee, sp, x + " has function type " + el.show(ctx, T) + "; only datatypes and enumerations can be eliminated");
  if (T->k != K::IMu || T->s.empty() || !el.scope().data.count(T->s))
    el.error(EErr::UnsupportedScrutinee, sp, x + " has type " + el.show(ctx, T) + ", which is not a declared datatype or enumeration");
  const DataInfo& di = el.scope().data.at(T->s);
  if (!di.unindexed())
    el.error(EErr::UnsupportedScrutinee, sp, x + " belongs to the indexed family " + di.name + "; only unindexed datatypes can be eliminated");
  TermP Tt = resugarAt(el.scope(), ctx.depth(), ctx.quote(T));
  auto [h, ps] = [&] {
    std::vector<TermP> args;
    TermP f = Tt;
    while (f->k == K::App) {
      args.insert(args.begin(), f->a[1]);
      f = f->a[0];
    }
    return std::make_pair(f, args);
  }();
  if (h->k != K::Const || h->s != di.name || ps.size() != di.paramNames.size())
    el.error(EErr::UnsupportedScrutinee, sp, "cannot recover the parameters of " + el.show(ctx, T));
  if (checkType(ctx, G) > 1) el.error(EErr::UnsupportedScrutinee, sp, "the motive for " + x + " is too large (Set2)");
  std::string name = rec ? recElimName(di.name) : caseElimName(di.name);
  const Global* eg = el.scope().g.find(name);
  if (!eg) el.error(EErr::UnsupportedScrutinee, sp, "no eliminator " + name + " in scope");
  p.dataName = di.name;
  std::vector<TermP> args = ps;
  args.push_back(p.scrut);
  args.push_back(p.motive);
  p.head = apps(cnst(name), args);

  V F = eg->vtype;
  for (auto& a : args) F = applyClo(F->clo, ctx.eval(a));
  V code = vapp(T->a[1], T->a[2]);
  auto view = viewTagged(code);
  if (!view) el.error(EErr::NotTagged, sp, di.name + " is not a tagged description");
  for (size_t k = 0; k < view->tags.size(); ++k) {
    if (F->k != K::Pi) el.error(EErr::UnsupportedScrutinee, sp, "eliminator " + name + " has an unexpected type");
    p.branches.push_back(EwmBranch{view->tags[k], F->a[0], ctorBinders(view->codes[k], rec, ctx.depth())});
    F = applyClo(F->clo, ctx.fresh());
  }
  return p;
}

OpenedBranch openBranch(const Ctx& ctx, const EwmBranch& b, const std::vector<std::string>& argNames) {
  OpenedBranch ob{ctx, b.method, {}};
  size_t next = 0;
  std::string last = "x";
  for (bool h : b.hyp) {
    std::string n;
    if (h) {
      n = last + "_ih";
    } else {
      n = next < argNames.size() ? argNames[next] : "x" + std::to_string(next);
      ++next;
      last = n;
    }
    V dom = ob.goal->a[0];
    V v = ob.ctx.fresh();
    ob.goal = applyClo(ob.goal->clo, v);
    ob.ctx = ob.ctx.extend(n, dom);
    ob.names.push_back(n);
  }
  return ob;
}

TermP closeBranch(const OpenedBranch& ob, TermP body) {
  for (auto it = ob.names.rbegin(); it != ob.names.rend(); ++it) body = lam(*it, body);
  return body;
}

TermP assemble(const EwmPlan& p, const std::vector<TermP>& methods) {
  if (p.enumeration) return mk(K::Switch, {p.enumE, p.motive, tupleTerm(methods), p.scrut});
  return apps(p.head, methods);
}

CtorPattern ctorPattern(Elab& el, const ExtP& e) {
  CtorPattern cp;
  if (e->k == EK::Tag) {
    cp.tag = e->s;
    return cp;
  }
  auto [h, args] = spine(e);
  if (h->k != EK::Var)
    el.error(EErr::PatternHeadMismatch, e->span, "expected a constructor pattern, got " + printExt(e));
  cp.tag = h->s;
  for (auto& a : args) {
    if (a->k != EK::Var)
      el.error(EErr::PatternHeadMismatch, a->span,
               "constructor arguments in patterns must be variables; use a nested by block for " + printExt(a));
    cp.names.push_back(a->s);
  }
  return cp;
}

// Programs --------------------------------------------------------------------

namespace {

class ProgramElab {
 public:
  ProgramElab(const Scope& s, const std::string& name, V type) : el_(s) { el_.setProgram(name, std::move(type)); }

  TermP program(const Ctx& ctx, const Program& p, const V& goal, int depth) {
    auto g = el_.goal([&, ctx] { return "elaborate a program for " + el_.show(ctx, goal); }, p.span);
    if (depth > kMaxByDepth) el_.error(EErr::NestingTooDeep, p.span, "by blocks nest deeper than " + std::to_string(kMaxByDepth));
    validate(ctx, p.pat, goal);
    if (p.rhs) return mk(K::LRet, {el_.check(ctx, p.rhs, goal->a[0])});

    EwmPlan plan = ewmRestricted(el_, ctx, p.rec, p.var, goal, p.span);
    int slot = labelSlotOf(ctx, goal, *lookup(ctx, p.var));
    if (slot < 0)
      el_.error(EErr::UnsupportedScrutinee, p.span, p.var + " must be a whole argument of the goal " + el_.show(ctx, goal));

    std::vector<const Program*> owner(plan.branches.size(), nullptr);
    std::vector<CtorPattern> pats(plan.branches.size());
    for (auto& sub : p.subs) {
      if (static_cast<size_t>(slot) >= sub.pat.args.size())
        el_.error(EErr::PatternHeadMismatch, sub.pat.span, "pattern has too few arguments for the goal " + el_.show(ctx, goal));
      CtorPattern cp = ctorPattern(el_, sub.pat.args[slot].term);
      size_t k = 0;
      while (k < plan.branches.size() && plan.branches[k].tag != cp.tag) ++k;
      if (k == plan.branches.size())
        el_.error(EErr::PatternHeadMismatch, sub.pat.args[slot].span, cp.tag + " is not a constructor of the type of " + p.var);
      if (owner[k])
        el_.error(EErr::OverlappingClauses, sub.span, "two clauses for constructor " + cp.tag);
      if (static_cast<int>(cp.names.size()) != plan.branches[k].arity())
        el_.error(EErr::PatternHeadMismatch, sub.pat.args[slot].span,
                  cp.tag + " takes " + std::to_string(plan.branches[k].arity()) + " argument(s)");
      owner[k] = &sub;
      pats[k] = cp;
    }
    std::vector<TermP> methods;
    for (size_t k = 0; k < plan.branches.size(); ++k) {
      if (!owner[k]) el_.error(EErr::MissingClause, p.span, "no clause for constructor " + plan.branches[k].tag);
      OpenedBranch ob = openBranch(ctx, plan.branches[k], pats[k].names);
      methods.push_back(closeBranch(ob, program(ob.ctx, *owner[k], ob.goal, depth + 1)));
    }
    return assemble(plan, methods);
  }

  Elab& elab() { return el_; }

 private:
  Elab el_;

  static std::optional<int> lookup(const Ctx& ctx, const std::string& x) { return lookupLocal(ctx, x); }

  void validate(const Ctx& ctx, const Pattern& pat, const V& goal) {
    auto mismatch = [&](Span sp, const std::string& msg) {
      el_.error(EErr::PatternHeadMismatch, sp, msg + " (goal " + el_.show(ctx, goal) + ")");
    };
    if (pat.head != goal->s) mismatch(pat.span, "clause head " + pat.head + " does not match the label");
    size_t n = (goal->a.size() - 1) / 2;
    if (pat.args.size() != n)
      mismatch(pat.span, "clause has " + std::to_string(pat.args.size()) + " argument(s), the label has " + std::to_string(n));
    for (size_t i = 0; i < n; ++i) {
      const PatArg& a = pat.args[i];
      if (a.kind != PatArg::Plain) mismatch(a.span, "program patterns take plain arguments");
      const V& want = goal->a[1 + 2 * i];
      TermP got;
      try {
        got = el_.check(ctx, a.term, goal->a[2 + 2 * i]);
      } catch (const ElabError& e) {
        mismatch(a.span, "argument " + std::to_string(i + 1) + " should be " + el_.show(ctx, want) + ": " + e.what());
      }
      if (!defEqV(ctx.depth(), ctx.eval(got), want))
        mismatch(a.span, "argument " + std::to_string(i + 1) + " should be " + el_.show(ctx, want) + ", got " +
                             printExt(a.term));
    }
  }
};

}  // namespace

void elabDefine(Scope& s, const LetDecl& d, bool recheck) {
  Elab el(s);
  auto g = el.goal([&] { return "define " + d.name; }, d.span);
  if (s.g.find(d.name) || s.data.count(d.name)) el.error(EErr::DuplicateName, d.span, d.name + " is already defined");
  Ctx ctx(&s.g);
  std::vector<TermP> types;
  for (auto& b : d.params) {
    auto [T, l] = el.type(ctx, b.type);
    (void)l;
    types.push_back(T);
    ctx = ctx.extend(b.name, ctx.eval(T));
  }
  auto [R, lr] = el.type(ctx, d.result);
  (void)lr;
  TermP fType = R;
  for (size_t i = d.params.size(); i-- > 0;) fType = pi(d.params[i].name, types[i], fType);
  std::vector<TermP> lab{R};
  int n = static_cast<int>(d.params.size());
  for (int i = 0; i < n; ++i) {
    lab.push_back(var(n - 1 - i));
    lab.push_back(ctx.quote(ctx.at(n - 1 - i).type));
  }
  TermP L = mk(K::LabelTy, std::move(lab), d.name);

  Ctx top(&s.g);
  ProgramElab pe(s, d.name, top.eval(fType));
  TermP body = pe.program(ctx, d.prog, ctx.eval(L), 0);
  TermP def = mk(K::LCall, {L, body});
  for (int i = n; i-- > 0;) def = lam(d.params[i].name, def);
  try {
    addGlobal(s.g, d.name, fType, def, recheck);
  } catch (const KernelError& ke) {
    el.kernelFailure(ke, d.span);
  }
  s.programs.insert(d.name);
}

}  // namespace idt

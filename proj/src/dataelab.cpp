#include "idt/dataelab.hpp"

#include <algorithm>

#include "idt/desc.hpp"
#include "idt/labels.hpp"

namespace idt {

std::string renderTrace(const TraceNode& root) {
  std::string out;
  std::function<void(const TraceNode&, int)> go = [&](const TraceNode& n, int depth) {
    out += std::string(2 * depth, ' ') + n.judgment;
    if (!n.input.empty()) out += " " + n.input;
    if (!n.output.empty()) out += "  ~>  " + n.output;
    out += "\n";
    for (auto& c : n.children) go(c, depth + 1);
  };
  go(root, 0);
  return out;
}

V dataTypeV(const Scope& s, const std::string& d, const std::vector<V>& ps) {
  const Global* g = s.g.find(d);
  if (!g || !g->value) throw std::logic_error("dataTypeV: " + d + " is not a defined datatype");
  V v = g->value;
  for (auto& p : ps) v = vapp(v, p);
  return v;
}

namespace {

std::optional<int> lookupLocal(const Ctx& ctx, const std::string& x) {
  const auto& es = ctx.entries();
  for (int i = static_cast<int>(es.size()) - 1; i >= 0; --i)
    if (es[i].name == x) return static_cast<int>(es.size()) - 1 - i;
  return std::nullopt;
}

struct Constraint {
  int level;
  ExtP value;
  V type;
};

class DataElab {
 public:
  DataElab(Scope& s, const DataDecl& d, const DataOptions& o) : s_(s), d_(d), o_(o), el_(s) {}

  void run() {
    Trace t(this, "ElabData", d_.name, d_.span);
    auto g = el_.goal([this] { return "elaborate datatype " + d_.name; }, d_.span);
    if (s_.g.find(d_.name) || s_.data.count(d_.name))
      el_.error(EErr::DuplicateName, d_.span, d_.name + " is already defined");
    np_ = static_cast<int>(d_.params.size());
    ni_ = static_cast<int>(d_.indices.size());

    Ctx ctx(&s_.g);
    std::vector<TermP> ptypes, itypes;
    for (auto& b : d_.params) {
      auto [T, l] = el_.type(ctx, b.type);
      (void)l;
      ptypes.push_back(T);
      ctx = ctx.extend(b.name, ctx.eval(T));
    }
    Ctx paramCtx = ctx;
    {
      Trace ti(this, "ElabIndices", ni_ ? printIndices() : "(none)", d_.span);
      for (int j = 0; j < ni_; ++j) {
        const Binder& b = d_.indices[j];
        auto gi = el_.goal([&] { return "index " + b.name + " : " + printExt(b.type); }, b.span);
        auto [T, l] = el_.type(ctx, b.type);
        for (int k = 0; k < j; ++k)
          if (mentionsVar(T, k))
            el_.error(EErr::DependentIndex, b.span, "index type of " + b.name + " mentions the earlier index " + d_.indices[j - 1 - k].name);
        if (l > 0) el_.error(EErr::CheckMismatch, b.span, "index types must live in Set, " + printExt(b.type) + " does not");
        itypes.push_back(T);
        indexTypes_.push_back(ctx.eval(T));
        ctx = ctx.extend(b.name, ctx.eval(T));
      }
      if (tracing()) ti.out(el_.showTerm(paramCtx, indexTypeTerm(itypes)));
    }

    TermP type = set(0);
    for (int j = ni_; j-- > 0;) type = pi(d_.indices[j].name, itypes[j], type);
    for (int j = np_; j-- > 0;) type = pi(d_.params[j].name, ptypes[j], type);
    try {
      addGlobal(s_.g, d_.name, type, nullptr, o_.recheck);
    } catch (const KernelError& ke) {
      el_.kernelFailure(ke, d_.span);
    }

    // The goal label <D ps [is]> over the parameter and index variables.
    auto L = std::make_shared<Term>();
    L->k = K::DLabelTy;
    L->s = d_.name;
    int depth = np_ + ni_;
    for (int j = 0; j < np_; ++j) {
      L->a.push_back(var(depth - 1 - j));
      L->tel += 'p';
    }
    for (int j = 0; j < ni_; ++j) {
      L->a.push_back(var(ni_ - 1 - j));
      L->a.push_back(ctx.quote(indexTypes_[j]));
      L->tel += 'i';
    }
    TermP label = L;
    TermP pats = patterns(ctx, d_.body, ctx.eval(label), 0);
    TermP called = mk(K::DCall, {label, pats});

    // R = \t. called, with each index replaced by its projection out of t.
    std::vector<TermP> proj;
    for (int m = 0; m < ni_; ++m) {
      TermP p = var(0);
      for (int k = 0; k < m; ++k) p = fst(p);
      proj.push_back(snd(p));
    }
    TermP R = lam("i", substMany(shift(called, 1, ni_), proj));
    TermP I = indexTypeTerm(itypes);
    TermP tup = tt();
    for (int j = 0; j < ni_; ++j) tup = pair(tup, var(ni_ - 1 - j));
    TermP value = mk(K::IMu, {shift(I, ni_), shift(R, ni_), tup}, d_.name);
    for (int j = ni_; j-- > 0;) value = lam(d_.indices[j].name, value);
    for (int j = np_; j-- > 0;) value = lam(d_.params[j].name, value);

    s_.g.m.erase(d_.name);
    s_.g.order.erase(std::remove(s_.g.order.begin(), s_.g.order.end(), d_.name), s_.g.order.end());
    try {
      addGlobal(s_.g, d_.name, type, value, o_.recheck);
    } catch (const KernelError& ke) {
      el_.kernelFailure(ke, d_.span);
    }

    DataInfo di;
    di.name = d_.name;
    for (auto& b : d_.params) di.paramNames.push_back(b.name);
    for (auto& b : d_.indices) di.indexNames.push_back(b.name);
    di.type = type;
    di.code = reduceCalls(called);
    di.tags = tagOrder_;
    di.argNames = argNames_;
    s_.data[d_.name] = di;
    s_.dataOrder.push_back(d_.name);
    for (auto& tg : tagOrder_) s_.ctorOwner.emplace(tg, d_.name);
    if (tracing()) t.out(el_.showTerm(ctx, di.code));
  }

 private:
  Scope& s_;
  const DataDecl& d_;
  DataOptions o_;
  Elab el_;
  int np_ = 0, ni_ = 0;
  std::vector<V> indexTypes_;
  std::vector<std::string> tagOrder_;
  std::map<std::string, std::vector<std::string>> argNames_;
  TraceNode* cur_ = nullptr;

  bool tracing() const { return o_.trace != nullptr; }

  class Trace {
   public:
    Trace(DataElab* d, const char* j, const std::string& in, Span sp) : d_(d), prev_(d->cur_) {
      if (!d->tracing()) return;
      TraceNode* parent = d->cur_;
      TraceNode n{j, in, "", sp, {}};
      if (!parent) {
        *d->o_.trace = std::move(n);
        node_ = d->o_.trace;
      } else {
        parent->children.push_back(std::move(n));
        node_ = &parent->children.back();
      }
      d->cur_ = node_;
    }
    ~Trace() {
      if (d_->tracing()) d_->cur_ = prev_;
    }
    void out(const std::string& s) {
      if (node_) node_->output = s;
    }

   private:
    DataElab* d_;
    TraceNode* prev_;
    TraceNode* node_ = nullptr;
  };

  std::string printIndices() const {
    std::string s;
    for (auto& b : d_.indices) s += (s.empty() ? "[" : " [") + b.name + " : " + printExt(b.type) + "]";
    return s;
  }

  TermP indexTypeTerm(const std::vector<TermP>& itypes) const {
    TermP I = unit();
    for (int j = 0; j < static_cast<int>(itypes.size()); ++j) I = times(I, shift(itypes[j], -j));
    return I;
  }

  // Output of a judgment re-checks at its expected type.
  void lemma(const Ctx& ctx, const TermP& t, const V& T, Span sp) {
    if (!o_.recheck) return;
    try {
      idt::check(ctx, t, T);
    } catch (const KernelError& ke) {
      el_.kernelFailure(ke, sp);
    }
  }

  TermP indexDesc(const Ctx& ctx, const V& label) { return mk(K::IDesc, {labelIndexType(ctx.quote(label))}); }

  TermP patterns(const Ctx& ctx, const std::vector<DataEntry>& entries, const V& label, int depth) {
    Trace t(this, "ElabDataPatts", tracing() ? el_.show(ctx, label) : "", d_.span);
    if (depth > kMaxByDepth)
      el_.error(EErr::NestingTooDeep, entries.empty() ? d_.span : entries[0].pat.span,
                "by blocks nest deeper than " + std::to_string(kMaxByDepth));
    std::vector<std::string> tags;
    std::vector<TermP> codes;
    {
      Trace tc(this, "ElabChoices", "", d_.span);
      for (size_t i = 0; i < entries.size(); ++i) {
        const DataEntry& e = entries[i];
        if (e.by) {
          if (i + 1 != entries.size())
            el_.error(EErr::ClausesAfterBy, entries[i + 1].pat.span, "no clauses may follow a by block");
          codes.push_back(byBlock(ctx, e, label, depth));
          tags.push_back("elim");
        } else {
          auto [tag, code] = constructor(ctx, e, label);
          codes.push_back(code);
          tags.push_back(tag);
        }
        for (size_t k = 0; k + 1 < tags.size(); ++k)
          if (tags[k] == tags.back())
            el_.error(EErr::DuplicateConstructor, e.con ? e.con->span : e.pat.span, "constructor " + tags.back() + " is declared twice");
      }
      if (tracing()) {
        std::string s = "{";
        for (size_t k = 0; k < tags.size(); ++k) s += (k ? "," : "") + tags[k];
        tc.out(s + "}");
      }
    }
    TermP E = enumLit(tags);
    TermP IT = indexDesc(ctx, label);
    TermP out = mk(K::DRet, {E, switchLit(E, lam("_", shift(IT, 1)), codes)});
    lemma(ctx, out, label, d_.span);
    if (tracing()) t.out(el_.showTerm(ctx, out));
    return out;
  }

  TermP byBlock(const Ctx& ctx, const DataEntry& e, const V& label, int depth) {
    const ByBlock& b = *e.by;
    auto cons = validatePattern(ctx, e.pat, label);
    if (!cons.empty()) el_.error(EErr::PatternHeadMismatch, e.pat.span, "a by block cannot constrain indices");
    EwmPlan plan = ewmRestricted(el_, ctx, b.rec, b.var, label, e.pat.span);
    int slot = labelSlotOf(ctx, label, *lookupLocal(ctx, b.var));
    if (slot < 0)
      el_.error(EErr::UnsupportedScrutinee, e.pat.span, b.var + " must be a whole argument of " + el_.show(ctx, label));
    std::vector<std::vector<DataEntry>> groups(plan.branches.size());
    std::vector<std::vector<std::string>> names(plan.branches.size());
    std::vector<bool> named(plan.branches.size(), false);
    for (auto& sub : b.body) {
      if (static_cast<size_t>(slot) >= sub.pat.args.size() || sub.pat.args[slot].kind == PatArg::Constraint)
        el_.error(EErr::PatternHeadMismatch, sub.pat.span, "expected a constructor of " + b.var + " at argument " + std::to_string(slot + 1));
      CtorPattern cp = ctorPattern(el_, sub.pat.args[slot].term);
      size_t k = 0;
      while (k < plan.branches.size() && plan.branches[k].tag != cp.tag) ++k;
      if (k == plan.branches.size())
        el_.error(EErr::PatternHeadMismatch, sub.pat.args[slot].span, cp.tag + " is not a constructor of the type of " + b.var);
      if (static_cast<int>(cp.names.size()) != plan.branches[k].arity())
        el_.error(EErr::PatternHeadMismatch, sub.pat.args[slot].span,
                  cp.tag + " takes " + std::to_string(plan.branches[k].arity()) + " argument(s)");
      if (!named[k]) {
        names[k] = cp.names;
        named[k] = true;
      }
      groups[k].push_back(sub);
    }
    std::vector<TermP> methods;
    for (size_t k = 0; k < plan.branches.size(); ++k) {
      OpenedBranch ob = openBranch(ctx, plan.branches[k], names[k]);
      methods.push_back(closeBranch(ob, patterns(ob.ctx, groups[k], ob.goal, depth + 1)));
    }
    return mk(K::DCall, {ctx.quote(label), assemble(plan, methods)});
  }

  std::pair<std::string, TermP> constructor(const Ctx& ctx, const DataEntry& e, const V& label) {
    const Constructor& c = *e.con;
    Trace t(this, "ElabConstr", c.tag, c.span);
    auto g = el_.goal([&] { return "constructor " + c.tag + " of " + d_.name; }, c.span);
    if (std::find(tagOrder_.begin(), tagOrder_.end(), c.tag) != tagOrder_.end())
      el_.error(EErr::DuplicateConstructor, c.span, "constructor " + c.tag + " is declared twice in " + d_.name);
    tagOrder_.push_back(c.tag);
    for (auto& b : c.args) argNames_[c.tag].push_back(b.name);
    auto cons = validatePattern(ctx, e.pat, label);
    TermP code = args(ctx, c.args, 0, cons, label);
    lemma(ctx, code, ctx.eval(indexDesc(ctx, label)), c.span);
    if (tracing()) t.out(el_.showTerm(ctx, code));
    return {c.tag, code};
  }

  [[noreturn]] void headMismatch(const Ctx& ctx, Span sp, const V& label, const std::string& msg) {
    el_.error(EErr::PatternHeadMismatch, sp, msg + " (expected " + el_.show(ctx, label) + ")");
  }

  std::vector<Constraint> validatePattern(const Ctx& ctx, const Pattern& pat, const V& label) {
    if (pat.head != d_.name) headMismatch(ctx, pat.span, label, "clause head " + pat.head + " is not " + d_.name);
    std::vector<Constraint> out;
    size_t j = 0, slot = 0;
    for (char c : label->tel) {
      if (slot >= pat.args.size()) headMismatch(ctx, pat.span, label, "too few arguments in the clause head");
      const PatArg& a = pat.args[slot];
      if (c == 'p') {
        if (a.kind != PatArg::Plain) headMismatch(ctx, a.span, label, "parameters are written without brackets");
        TermP got;
        try {
          got = el_.synth(ctx, a.term).first;
        } catch (const ElabError& e) {
          headMismatch(ctx, a.span, label, std::string("parameter ") + printExt(a.term) + ": " + e.what());
        }
        if (!defEqV(ctx.depth(), ctx.eval(got), label->a[j]))
          headMismatch(ctx, a.span, label, "parameter " + printExt(a.term) + " must be " + el_.show(ctx, label->a[j]));
        j += 1;
      } else if (c == 'i') {
        const V& want = label->a[j];
        const V& I = label->a[j + 1];
        if (a.kind == PatArg::Plain) headMismatch(ctx, a.span, label, "index positions are written in brackets");
        if (a.kind == PatArg::Constraint) {
          TermP w = ctx.quote(want);
          if (w->k != K::Var || ctx.at(w->n).name != a.var)
            headMismatch(ctx, a.span, label, "cannot constrain " + a.var + " here");
          out.push_back(Constraint{ctx.depth() - 1 - w->n, a.term, I});
        } else {
          TermP got;
          try {
            got = el_.check(ctx, a.term, I);
          } catch (const ElabError& e) {
            headMismatch(ctx, a.span, label, std::string("index ") + printExt(a.term) + ": " + e.what());
          }
          if (!defEqV(ctx.depth(), ctx.eval(got), want))
            headMismatch(ctx, a.span, label, "index " + printExt(a.term) + " must be " + el_.show(ctx, want));
        }
        j += 2;
      } else {
        headMismatch(ctx, a.span, label, "unexpected constraint slot");
      }
      ++slot;
    }
    if (slot != pat.args.size()) headMismatch(ctx, pat.span, label, "too many arguments in the clause head");
    return out;
  }

  bool recursiveHead(const Ctx& ctx, const ExtP& T) const {
    auto [h, as] = spine(T);
    return h->k == EK::Var && h->s == d_.name && !lookupLocal(ctx, d_.name);
  }

  // `D ps is` at a recursive position: parameters unchanged, indices paired onto ().
  TermP extractIndices(const Ctx& ctx, const ExtP& T) {
    Trace t(this, "ElabRecArgs", printExt(T), T->span);
    auto [h, as] = spine(T);
    if (static_cast<int>(as.size()) != np_ + ni_)
      el_.error(EErr::PatternHeadMismatch, T->span,
                d_.name + " takes " + std::to_string(np_ + ni_) + " argument(s) at a recursive position, got " + std::to_string(as.size()));
    for (int j = 0; j < np_; ++j) {
      TermP got;
      try {
        got = el_.synth(ctx, as[j]).first;
      } catch (const ElabError& e) {
        el_.error(EErr::PatternHeadMismatch, as[j]->span, std::string("parameter ") + printExt(as[j]) + ": " + e.what());
      }
      if (!alphaEq(ctx.quote(ctx.eval(got)), var(ctx.depth() - 1 - j)))
        el_.error(EErr::PatternHeadMismatch, as[j]->span,
                  "recursive occurrences must use the parameter " + d_.params[j].name + " unchanged, got " + printExt(as[j]));
    }
    TermP tup = tt();
    for (int j = 0; j < ni_; ++j) tup = pair(tup, el_.check(ctx, as[np_ + j], indexTypes_[j]));
    if (tracing()) t.out(el_.showTerm(ctx, tup));
    return tup;
  }

  void positive(const Ctx& ctx, const TermP& T, Span sp) {
    if (mentionsConst(T, d_.name))
      el_.error(EErr::NonPositive, sp, d_.name + " occurs in a non-recursive argument type " + el_.showTerm(ctx, T));
  }

  TermP args(const Ctx& ctx, const std::vector<Binder>& bs, size_t i, const std::vector<Constraint>& cons, const V& label) {
    if (i == bs.size()) return constraints(ctx, cons, 0);
    const Binder& b = bs[i];
    Trace t(this, "ElabArg", b.name + " : " + printExt(b.type), b.span);
    auto g = el_.goal([&] { return "argument " + b.name + " : " + printExt(b.type); }, b.span);
    TermP out;
    if (recursiveHead(ctx, b.type)) {
      TermP idx = extractIndices(ctx, b.type);
      out = mk(K::DTimes, {mk(K::DVarI, {idx}), args(ctx, bs, i + 1, cons, label)});
    } else if (b.type->k == EK::Pi && exponential(ctx, b.type)) {
      out = mk(K::DTimes, {higherOrder(ctx, b.type), args(ctx, bs, i + 1, cons, label)});
    } else {
      auto [T, l] = el_.type(ctx, b.type);
      positive(ctx, T, b.span);
      if (l > 0) el_.error(EErr::CheckMismatch, b.span, "constructor argument types must live in Set, " + printExt(b.type) + " does not");
      Ctx c2 = ctx.extend(b.name, ctx.eval(T));
      out = mk(K::DSigma, {T, lam(b.name, args(c2, bs, i + 1, cons, label))});
    }
    if (tracing()) t.out(el_.showTerm(ctx, out));
    return out;
  }

  bool exponential(const Ctx& ctx, const ExtP& T) const {
    ExtP c = T;
    while (c->k == EK::Pi) c = c->a[1];
    return recursiveHead(ctx, c);
  }

  TermP higherOrder(const Ctx& ctx, const ExtP& T) {
    if (T->k != EK::Pi) return mk(K::DVarI, {extractIndices(ctx, T)});
    auto [S, l] = el_.type(ctx, T->a[0]);
    positive(ctx, S, T->a[0]->span);
    if (l > 0) el_.error(EErr::CheckMismatch, T->span, "function argument domains must live in Set");
    std::string x = T->s.empty() ? "_" : T->s;
    return mk(K::DPi, {S, lam(x, higherOrder(ctx.extend(x, ctx.eval(S)), T->a[1]))});
  }

  TermP constraints(const Ctx& ctx, const std::vector<Constraint>& cons, size_t k) {
    if (k == 0) {
      Trace t(this, "ElabEqs", cons.empty() ? "(none)" : std::to_string(cons.size()) + " constraint(s)", d_.span);
      TermP out = constraintsFrom(ctx, cons, 0);
      if (tracing()) t.out(el_.showTerm(ctx, out));
      return out;
    }
    return constraintsFrom(ctx, cons, k);
  }

  TermP constraintsFrom(const Ctx& ctx, const std::vector<Constraint>& cons, size_t k) {
    if (k == cons.size()) return mk(K::DOne);
    const Constraint& c = cons[k];
    TermP v = el_.check(ctx, c.value, c.type);
    TermP E = eq(ctx.quote(c.type), var(ctx.depth() - 1 - c.level), v);
    return mk(K::DSigma, {E, lam("_", constraintsFrom(ctx.extend("_", ctx.eval(E)), cons, k + 1))});
  }
};

// Eliminators --------------------------------------------------------------------

V arrowV(V a, V b) {
  return vpi("_", std::move(a), [b](V) { return b; });
}
V pairV(V a, V b) { return vmk(K::Pair, {std::move(a), std::move(b)}); }

class ElimGen {
 public:
  ElimGen(const Scope& s, const std::string& d, const std::vector<V>& ps) : g_(&s.g), d_(d) {
    Dps = dataTypeV(s, d, ps);
    if (Dps->k != K::IMu) throw std::logic_error("ElimGen: not a datatype");
    R_ = Dps->a[1];
    std::string name = d;
    V R = R_;
    X_ = vlam("j", [R, name](V j) { return vmk(K::IMu, {vunit(), R, j}, name); });
    code_ = vapp(R_, vtt());
    auto view = viewTagged(code_);
    if (!view) throw std::logic_error("ElimGen: untagged code");
    tags_ = view->tags;
    codes_ = view->codes;
    const DataInfo& di = s.data.at(d);
    for (auto& t : tags_) {
      auto it = di.argNames.find(t);
      names_.push_back(it == di.argNames.end() ? std::vector<std::string>{} : it->second);
    }
    for (size_t k = 0; k < tags_.size(); ++k) tagV_.push_back(eval(Env{}, numeral(static_cast<int>(k), tags_[k])));
  }

  V Dps;
  size_t size() const { return tags_.size(); }
  const std::string& tag(size_t k) const { return tags_[k]; }

  V motiveType() const { return arrowV(Dps, vset(1)); }

  // \i y. unitElim (\u. IMu Unit R u -> Set1) P i y
  V lift(V P) const {
    const Globals* g = g_;
    V R = R_;
    V C = vlam("u", [R](V u) { return arrowV(vmk(K::IMu, {vunit(), R, u}), vset(1)); });
    return vlam("i", [g, C, P](V i) {
      V f = applyBuiltin(g, K::UnitElim, {C, P, i});
      return vlam("y", [f](V y) { return vapp(f, y); });
    });
  }

  V in(V payload, size_t k) const { return vmk(K::In, {std::move(payload)}, tags_[k], 1); }

  V methodType(size_t k, V P, bool rec) const {
    V tagv = tagV_[k];
    return methodType(codes_[k], P, lift(P), rec, [tagv](V z) { return pairV(tagv, z); }, k, 0);
  }

  V body(V P, const std::vector<V>& ms, V x, bool rec) const {
    V Pp = lift(P);
    const Globals* g = g_;
    V R = R_, X = X_, code = code_;
    V E = code_->a[0], Tf = code_->a[1];
    V C2 = vlam("d", [=, this](V d) { return arrowV(vIAll(vunit(), code, X, Pp, d), vapp(P, vmk(K::In, {d}))); });
    V Pk = vlam("k", [=](V k) {
      V c = vapp(Tf, k);
      return vpi("b", vIInterp(vunit(), c, X), [=](V b) {
        return arrowV(vIAll(vunit(), c, X, Pp, b), vapp(P, vmk(K::In, {pairV(k, b)})));
      });
    });
    V tuple = vtt();
    for (size_t k = size(); k-- > 0;) {
      V tagv = tagV_[k], ck = codes_[k], m = ms[k];
      V br = vlam("b", [=, this](V b) {
        return vlam("h", [=, this](V h) { return walk(ck, b, h, [tagv](V z) { return pairV(tagv, z); }, m, P, Pp, rec, k); });
      });
      tuple = pairV(br, tuple);
    }
    V f = vlam("k", [=](V k) {
      V sw = applyBuiltin(g, K::Switch, {E, Pk, tuple, k});
      return vlam("b", [sw](V b) { return vapp(sw, b); });
    });
    V M0 = vlam("d", [=](V d) {
      V sp = applyBuiltin(g, K::Split, {C2, f, d});
      return vlam("h", [sp](V h) { return vapp(sp, h); });
    });
    V Cm = vlam("u", [=](V u) {
      V Ru = vapp(R, u);
      return vpi("d", vIInterp(vunit(), Ru, X),
                 [=](V d) { return arrowV(vIAll(vunit(), Ru, X, Pp, d), vapp(vapp(Pp, u), vmk(K::In, {d}))); });
    });
    V M = vlam("i", [=](V i) { return applyBuiltin(g, K::UnitElim, {Cm, M0, i}); });
    return applyBuiltin(g, K::IInduction, {vunit(), R, Pp, M, vtt(), x});
  }

 private:
  const Globals* g_;
  std::string d_;
  V R_, X_, code_;
  std::vector<std::string> tags_;
  std::vector<V> codes_, tagV_;
  std::vector<std::vector<std::string>> names_;

  std::string argName(size_t k, size_t pos) const {
    return pos < names_[k].size() && names_[k][pos] != "_" ? names_[k][pos] : "r";
  }

  using Wrap = std::function<V(V)>;

  V methodType(V c, V P, V Pp, bool rec, Wrap wrap, size_t k, size_t pos) const {
    V X = X_;
    switch (c->k) {
      case K::DOne:
        return vapp(P, in(wrap(vtt()), k));
      case K::DSigma:
      case K::DSigmaE: {
        V S = c->k == K::DSigma ? c->a[0] : vmk(K::EnumT, {c->a[0]});
        V T = c->a[1];
        std::string x = T->clo ? T->clo->name : "x";
        return vpi(x, S, [=, this](V a) {
          return methodType(vapp(T, a), P, Pp, rec, [wrap, a](V z) { return wrap(pairV(a, z)); }, k, pos + 1);
        });
      }
      case K::DTimes: {
        V A = c->a[0], B = c->a[1];
        return vpi(argName(k, pos), vIInterp(vunit(), A, X), [=, this](V a) {
          V rest = methodType(B, P, Pp, rec, [wrap, a](V z) { return wrap(pairV(a, z)); }, k, pos + 1);
          if (!rec) return rest;
          return arrowV(vIAll(vunit(), A, X, Pp, a), rest);
        });
      }
      default:
        return vpi(argName(k, pos), vIInterp(vunit(), c, X), [=, this](V a) {
          V res = vapp(P, in(wrap(a), k));
          if (!rec) return res;
          return arrowV(vIAll(vunit(), c, X, Pp, a), res);
        });
    }
  }

  V walk(V c, V r, V h, Wrap wrap, V m, V P, V Pp, bool rec, size_t k) const {
    const Globals* g = g_;
    V X = X_;
    switch (c->k) {
      case K::DOne: {
        V Cu = vlam("u", [=, this](V u) { return arrowV(vunit(), vapp(P, in(wrap(u), k))); });
        V mm = vlam("_", [m](V) { return m; });
        return vapp(applyBuiltin(g, K::UnitElim, {Cu, mm, r}), h);
      }
      case K::DSigma:
      case K::DSigmaE:
      case K::DTimes: {
        V Cs = vlam("r", [=, this](V r2) { return arrowV(vIAll(vunit(), c, X, Pp, r2), vapp(P, in(wrap(r2), k))); });
        V fs = vlam("a", [=, this](V a) {
          return vlam("b", [=, this](V b) {
            return vlam("h", [=, this](V h2) {
              Wrap w2 = [wrap, a](V z) { return wrap(pairV(a, z)); };
              if (c->k == K::DTimes) {
                V m2 = rec ? vapp(vapp(m, a), vfst(h2)) : vapp(m, a);
                return walk(c->a[1], b, vsnd(h2), w2, m2, P, Pp, rec, k);
              }
              return walk(vapp(c->a[1], a), b, h2, w2, vapp(m, a), P, Pp, rec, k);
            });
          });
        });
        return vapp(applyBuiltin(g, K::Split, {Cs, fs, r}), h);
      }
      default:
        return rec ? vapp(vapp(m, r), h) : vapp(m, r);
    }
  }
};

}  // namespace

V overParams(V ty, size_t k, std::vector<V> ps, bool lam, std::function<V(const std::vector<V>&)> f) {
  if (k == 0) return f(ps);
  std::string n = ty->clo ? ty->clo->name : "p";
  auto next = [=](V p) {
    auto q = ps;
    q.push_back(p);
    return overParams(applyClo(ty->clo, p), k - 1, q, lam, f);
  };
  return lam ? vlam(n, next) : vpi(n, ty->a[0], next);
}

void elabData(Scope& s, const DataDecl& d, const DataOptions& o) {
  Scope work = s;
  DataElab(work, d, o).run();
  if (work.data.at(d.name).unindexed()) {
    try {
      addEliminators(work, d.name, o.recheck);
    } catch (const KernelError& ke) {
      throw ElabError(EErr::KernelRejected, d.span, {"generate eliminators for " + d.name},
                      std::string("kernel rejected a generated eliminator (") + kerrName(ke.kind) + "): " + ke.what());
    }
  }
  commitScope(s, work);
}

void addEliminators(Scope& s, const std::string& d, bool recheck) {
  const Global* g = s.g.find(d);
  const DataInfo& di = s.data.at(d);
  size_t np = di.paramNames.size();
  V Dty = g->vtype;
  const Scope* sp = &s;
  for (bool rec : {false, true}) {
    V type = overParams(Dty, np, {}, false, [=](const std::vector<V>& ps) {
      auto gen = std::make_shared<ElimGen>(*sp, d, ps);
      return vpi("x", gen->Dps, [=](V x) {
        return vpi("P", gen->motiveType(), [=](V P) {
          auto methods = std::make_shared<std::function<V(size_t)>>();
          std::weak_ptr<std::function<V(size_t)>> self = methods;
          *methods = [=](size_t k) -> V {
            if (k == gen->size()) return vapp(P, x);
            auto me = self.lock();
            return vpi("m_" + gen->tag(k), gen->methodType(k, P, rec), [me, k](V) { return (*me)(k + 1); });
          };
          return (*methods)(0);
        });
      });
    });
    V value = overParams(Dty, np, {}, true, [=](const std::vector<V>& ps) {
      auto gen = std::make_shared<ElimGen>(*sp, d, ps);
      return vlam("x", [=](V x) {
        return vlam("P", [=](V P) {
          auto methods = std::make_shared<std::function<V(size_t, std::vector<V>)>>();
          std::weak_ptr<std::function<V(size_t, std::vector<V>)>> self = methods;
          *methods = [=](size_t k, std::vector<V> ms) -> V {
            if (k == gen->size()) return gen->body(P, ms, x, rec);
            auto me = self.lock();
            return vlam("m_" + gen->tag(k), [me, k, ms](V m) {
              auto m2 = ms;
              m2.push_back(m);
              return (*me)(k + 1, m2);
            });
          };
          return (*methods)(0, {});
        });
      });
    });
    TermP tt_ = readback(0, type);
    TermP vt = readback(0, value);
    addGlobal(s.g, rec ? recElimName(d) : caseElimName(d), tt_, vt, recheck);
  }
}

}  // namespace idt

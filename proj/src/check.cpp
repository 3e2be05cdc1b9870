#include <algorithm>

#include "idt/kernel.hpp"

namespace idt {

const char* kerrName(KErr e) {
  switch (e) {
    case KErr::UnboundVariable:
      return "UnboundVariable";
    case KErr::NotAFunction:
      return "NotAFunction";
    case KErr::NotAPair:
      return "NotAPair";
    case KErr::UniverseMismatch:
      return "UniverseMismatch";
    case KErr::TypeMismatch:
      return "TypeMismatch";
  }
  return "?";
}

Ctx Ctx::extend(const std::string& name, V type) const {
  Ctx c = *this;
  V x = vvar(depth());
  c.env_ = env_.push(x);
  c.entries_.push_back(CtxEntry{name, std::move(type), nullptr});
  return c;
}

Ctx Ctx::define(const std::string& name, V type, V value) const {
  Ctx c = *this;
  c.env_ = env_.push(value);
  c.entries_.push_back(CtxEntry{name, std::move(type), std::move(value)});
  return c;
}

std::vector<std::string> Ctx::names() const {
  std::vector<std::string> r;
  for (auto& e : entries_) r.push_back(e.name);
  return r;
}

TermP normalize(const Ctx& ctx, const TermP& t) { return ctx.quote(ctx.eval(t)); }

namespace {

bool hintOnly(K k) { return k == K::ZeroE || k == K::SucE || k == K::In || k == K::IMu; }

// Compares values directly, agreeing with alphaEq on their readbacks.
bool conv(int depth, const V& x, const V& y) {
  if (x == y) return true;
  if (x->k != y->k) return false;
  switch (x->k) {
    case K::Neutral: {
      if (x->s != y->s || (x->s.empty() && x->n != y->n) || x->sp.size() != y->sp.size()) return false;
      for (size_t i = 0; i < x->sp.size(); ++i) {
        const Elim& a = x->sp[i];
        const Elim& b = y->sp[i];
        if (a.k != b.k) return alphaEq(readback(depth, x), readback(depth, y));
        if (a.a.size() != b.a.size()) return false;
        for (size_t j = 0; j < a.a.size(); ++j)
          if (!conv(depth, a.a[j], b.a[j])) return false;
      }
      return true;
    }
    case K::Pi:
    case K::Sigma: {
      if (!conv(depth, x->a[0], y->a[0])) return false;
      V v = vvar(depth);
      return conv(depth + 1, applyClo(x->clo, v), applyClo(y->clo, v));
    }
    case K::Lam: {
      V v = vvar(depth);
      return conv(depth + 1, applyClo(x->clo, v), applyClo(y->clo, v));
    }
    default:
      if ((x->n != y->n && !hintOnly(x->k)) || (x->s != y->s && !hintOnly(x->k)) || x->tel != y->tel ||
          x->a.size() != y->a.size())
        return false;
      for (size_t i = 0; i < x->a.size(); ++i)
        if (!conv(depth, x->a[i], y->a[i])) return false;
      return true;
  }
}

}  // namespace

bool defEqV(int depth, const V& x, const V& y) { return conv(depth, x, y); }

bool defEq(const Ctx& ctx, const TermP& t, const TermP& u) { return alphaEq(normalize(ctx, t), normalize(ctx, u)); }

bool subtype(int depth, const V& x, const V& y) {
  if (x->k == K::Set && y->k == K::Set) return x->n <= y->n;
  if (x->k == K::Pi && y->k == K::Pi) {
    if (!defEqV(depth, x->a[0], y->a[0])) return false;
    V v = vvar(depth);
    return subtype(depth + 1, applyClo(x->clo, v), applyClo(y->clo, v));
  }
  if (x->k == K::Sigma && y->k == K::Sigma) {
    if (!subtype(depth, x->a[0], y->a[0])) return false;
    V v = vvar(depth);
    return subtype(depth + 1, applyClo(x->clo, v), applyClo(y->clo, v));
  }
  return defEqV(depth, x, y);
}

namespace {

[[noreturn]] void fail(KErr k, const TermP& t, const std::string& msg) { throw KernelError(k, t, msg); }

std::string show(const Ctx& ctx, const V& v) {
  // Printing lives in the surface module; the kernel reports kinds only.
  auto t = ctx.quote(v);
  return kindName(t->k);
}

void expectSub(const Ctx& ctx, const TermP& t, const V& got, const V& want) {
  if (!subtype(ctx.depth(), got, want))
    fail(KErr::TypeMismatch, t, "type mismatch: expected " + show(ctx, want) + ", got " + show(ctx, got));
}

V arrowV(V a, V b) {
  return vpi("_", std::move(a), [b](V) { return b; });
}

/** Type of motives over `dom` landing in any universe. */
V motiveOver(V dom) { return arrowV(std::move(dom), vset(2)); }

V closeOver(const Ctx& ctx, const std::string& x, V dom, const V& bodyType) {
  // Build a Pi value from a type computed under an extended context.
  TermP cod = readback(ctx.depth() + 1, bodyType);
  auto c = std::make_shared<Closure>(Closure{ctx.env(), cod, nullptr, x});
  auto v = std::make_shared<Value>();
  v->k = K::Pi;
  v->s = x;
  v->a = {std::move(dom)};
  v->clo = c;
  return v;
}

/** Level of a family `P : doms -> Set k`, read off syntactically when P is a lambda. */
int familyLevel(const Ctx& ctx, const TermP& P, const std::vector<V>& doms) {
  Ctx c = ctx;
  TermP body = P;
  size_t i = 0;
  while (i < doms.size() && body->k == K::Lam) {
    if (body->a.size() > 1) {
      int l = checkType(c, body->a[1]);
      (void)l;
      if (!defEqV(c.depth(), c.eval(body->a[1]), doms[i])) fail(KErr::TypeMismatch, P, "motive domain mismatch");
    }
    c = c.extend(body->s, doms[i]);
    body = body->a[0];
    ++i;
  }
  if (i == doms.size()) return checkType(c, body);
  // Not syntactically a lambda: infer and inspect.
  V T = infer(c, body);
  for (; i < doms.size(); ++i) {
    if (T->k != K::Pi) fail(KErr::NotAFunction, P, "family expected");
    if (!defEqV(c.depth(), T->a[0], doms[i])) fail(KErr::TypeMismatch, P, "family domain mismatch");
    V x = c.fresh();
    c = c.extend("_", doms[i]);
    T = applyClo(T->clo, x);
  }
  if (T->k != K::Set) fail(KErr::UniverseMismatch, P, "family must land in a universe");
  return T->n;
}

bool isCodeType(const V& T) { return T->k == K::Desc || T->k == K::IDesc; }

V labelResult(const Ctx& ctx, const TermP& L, K want) {
  V Lt = infer(ctx, L);
  if (Lt->k != K::Set) fail(KErr::UniverseMismatch, L, "label must be a type");
  V Lv = ctx.eval(L);
  if (Lv->k != want) fail(KErr::TypeMismatch, L, "label type expected");
  return Lv;
}

}  // namespace

int checkType(const Ctx& ctx, const TermP& t) {
  switch (t->k) {
    case K::Pi:
    case K::Sigma: {
      int a = checkType(ctx, t->a[0]);
      int b = checkType(ctx.extend(t->s, ctx.eval(t->a[0])), t->a[1]);
      return std::max(a, b);
    }
    default: {
      V T = infer(ctx, t);
      if (T->k != K::Set) fail(KErr::UniverseMismatch, t, "expected a type");
      return T->n;
    }
  }
}

V infer(const Ctx& ctx, const TermP& t) {
  auto ev = [&](int i) { return ctx.eval(t->a[i]); };
  auto chk = [&](int i, const V& T) { check(ctx, t->a[i], T); };
  switch (t->k) {
    case K::Var:
      if (t->n < 0 || t->n >= ctx.depth()) fail(KErr::UnboundVariable, t, "variable out of scope");
      return ctx.at(t->n).type;
    case K::Const: {
      const Global* g = ctx.globals() ? ctx.globals()->find(t->s) : nullptr;
      if (!g) fail(KErr::UnboundVariable, t, "unknown global " + t->s);
      return g->vtype;
    }
    case K::Set:
      if (t->n < 0 || t->n >= 2) fail(KErr::UniverseMismatch, t, "no universe above Set2");
      return vset(t->n + 1);
    case K::Pi:
    case K::Sigma:
      return vset(checkType(ctx, t));
    case K::Lam: {
      if (t->a.size() < 2) fail(KErr::TypeMismatch, t, "cannot infer the type of an unannotated lambda");
      checkType(ctx, t->a[1]);
      V dom = ev(1);
      V B = infer(ctx.extend(t->s, dom), t->a[0]);
      return closeOver(ctx, t->s, dom, B);
    }
    case K::App: {
      V F = infer(ctx, t->a[0]);
      if (F->k != K::Pi) fail(KErr::NotAFunction, t->a[0], "applying a non-function");
      chk(1, F->a[0]);
      return applyClo(F->clo, ev(1));
    }
    case K::Pair: {
      V A = infer(ctx, t->a[0]);
      V B = infer(ctx, t->a[1]);
      return vsigma("_", A, [B](V) { return B; });
    }
    case K::Fst:
    case K::Snd: {
      V S = infer(ctx, t->a[0]);
      if (S->k != K::Sigma) fail(KErr::NotAPair, t->a[0], "projection from a non-pair");
      if (t->k == K::Fst) return S->a[0];
      return applyClo(S->clo, vfst(ev(0)));
    }
    case K::Split: {
      V S = infer(ctx, t->a[2]);
      if (S->k != K::Sigma) fail(KErr::NotAPair, t->a[2], "split of a non-pair");
      chk(0, motiveOver(S));
      V C = ev(0);
      V A = S->a[0];
      auto Sc = S->clo;
      V ft = vpi("a", A, [Sc, C](V a) {
        return vpi("b", applyClo(Sc, a), [C, a](V b) { return vapp(C, vmk(K::Pair, {a, b})); });
      });
      chk(1, ft);
      return vapp(C, ev(2));
    }
    case K::Unit:
    case K::UId:
    case K::EnumU:
      return vset(0);
    case K::Void:
      return vunit();
    case K::UnitElim: {
      chk(2, vunit());
      chk(0, motiveOver(vunit()));
      V C = ev(0);
      chk(1, vapp(C, vtt()));
      return vapp(C, ev(2));
    }
    case K::Tag:
      if (t->s.empty()) fail(KErr::TypeMismatch, t, "empty tag");
      return vmk(K::UId);
    case K::NilE:
      return vmk(K::EnumU);
    case K::ConsE:
      chk(0, vmk(K::UId));
      chk(1, vmk(K::EnumU));
      return vmk(K::EnumU);
    case K::EnumT:
      chk(0, vmk(K::EnumU));
      return vset(0);
    case K::PiE: {
      chk(0, vmk(K::EnumU));
      return vset(familyLevel(ctx, t->a[1], {vmk(K::EnumT, {ev(0)})}));
    }
    case K::Switch: {
      chk(0, vmk(K::EnumU));
      V E = ev(0);
      V ET = vmk(K::EnumT, {E});
      chk(1, motiveOver(ET));
      V P = ev(1);
      chk(2, vPiEnum(E, P));
      chk(3, ET);
      return vapp(P, ev(3));
    }
    case K::Eq: {
      int l = checkType(ctx, t->a[0]);
      V A = ev(0);
      chk(1, A);
      chk(2, A);
      return vset(l);
    }
    case K::J: {
      checkType(ctx, t->a[0]);
      V A = ev(0);
      chk(1, A);
      V x = ev(1);
      V Pt = vpi("y", A, [A, x](V y) { return arrowV(vmk(K::Eq, {A, x, y}), vset(2)); });
      chk(2, Pt);
      V P = ev(2);
      chk(3, vapp(vapp(P, x), vmk(K::Refl)));
      chk(4, A);
      V y = ev(4);
      chk(5, vmk(K::Eq, {A, x, y}));
      return vapp(vapp(P, y), ev(5));
    }
    case K::Desc:
      return vset(1);
    case K::Interp:
      chk(0, vmk(K::Desc));
      chk(1, vset(0));
      return vset(0);
    case K::Mu:
      chk(0, vmk(K::Desc));
      return vset(0);
    case K::Induction: {
      chk(0, vmk(K::Desc));
      V D = ev(0);
      V MuD = vmk(K::Mu, {D});
      chk(1, motiveOver(MuD));
      V P = ev(1);
      V mt = vpi("d", vInterp(D, MuD), [D, MuD, P](V d) {
        return arrowV(vAll(D, MuD, P, d), vapp(P, vmk(K::In, {d})));
      });
      chk(2, mt);
      chk(3, MuD);
      return vapp(P, ev(3));
    }
    case K::All: {
      chk(0, vmk(K::Desc));
      chk(1, vset(0));
      V D = ev(0), X = ev(1);
      int l = familyLevel(ctx, t->a[2], {X});
      chk(3, vInterp(D, X));
      return vset(l);
    }
    case K::IndMap: {
      chk(0, vmk(K::Desc));
      V D = ev(0);
      V MuD = vmk(K::Mu, {D});
      chk(1, motiveOver(MuD));
      V P = ev(1);
      V mt = vpi("d", vInterp(D, MuD), [D, MuD, P](V d) {
        return arrowV(vAll(D, MuD, P, d), vapp(P, vmk(K::In, {d})));
      });
      chk(2, mt);
      chk(3, vmk(K::Desc));
      V sub = ev(3);
      chk(4, vInterp(sub, MuD));
      return vAll(sub, MuD, P, ev(4));
    }
    case K::IDesc:
      chk(0, vset(0));
      return vset(1);
    case K::IInterp: {
      chk(0, vset(0));
      V I = ev(0);
      chk(1, vmk(K::IDesc, {I}));
      chk(2, arrowV(I, vset(0)));
      return vset(0);
    }
    case K::IMu: {
      chk(0, vset(0));
      V I = ev(0);
      chk(1, arrowV(I, vmk(K::IDesc, {I})));
      chk(2, I);
      return vset(0);
    }
    case K::IInduction:
    case K::IIndMap: {
      chk(0, vset(0));
      V I = ev(0);
      chk(1, arrowV(I, vmk(K::IDesc, {I})));
      V R = ev(1);
      V X = vIMuFam(I, R);
      chk(2, vpi("i", I, [I, R](V i) { return motiveOver(vmk(K::IMu, {I, R, i})); }));
      V P = ev(2);
      V mt = vpi("i", I, [I, R, X, P](V i) {
        V Ri = vapp(R, i);
        return vpi("d", vIInterp(I, Ri, X), [I, Ri, X, P, i](V d) {
          return arrowV(vIAll(I, Ri, X, P, d), vapp(vapp(P, i), vmk(K::In, {d})));
        });
      });
      chk(3, mt);
      if (t->k == K::IInduction) {
        chk(4, I);
        V i = ev(4);
        chk(5, vmk(K::IMu, {I, R, i}));
        return vapp(vapp(P, i), ev(5));
      }
      chk(4, vmk(K::IDesc, {I}));
      V sub = ev(4);
      chk(5, vIInterp(I, sub, X));
      return vIAll(I, sub, X, P, ev(5));
    }
    case K::IAll: {
      chk(0, vset(0));
      V I = ev(0);
      chk(1, vmk(K::IDesc, {I}));
      chk(2, arrowV(I, vset(0)));
      V D = ev(1), X = ev(2);
      // P : (i : I) -> X i -> Set k
      int l;
      {
        const TermP& P = t->a[3];
        if (P->k == K::Lam && P->a.size() == 1 && P->a[0]->k == K::Lam && P->a[0]->a.size() == 1) {
          Ctx c1 = ctx.extend(P->s, I);
          V xi = vapp(X, vvar(ctx.depth()));
          Ctx c2 = c1.extend(P->a[0]->s, xi);
          l = checkType(c2, P->a[0]->a[0]);
        } else {
          chk(3, vpi("i", I, [X](V i) { return motiveOver(vapp(X, i)); }));
          l = 2;
        }
      }
      chk(4, vIInterp(I, D, X));
      return vset(l);
    }
    case K::LabelTy: {
      int l = checkType(ctx, t->a[0]);
      for (size_t i = 1; i + 1 < t->a.size(); i += 2) {
        checkType(ctx, t->a[i + 1]);
        check(ctx, t->a[i], ctx.eval(t->a[i + 1]));
      }
      return vset(l);
    }
    case K::LCall: {
      V L = labelResult(ctx, t->a[0], K::LabelTy);
      chk(1, L);
      return L->a[0];
    }
    case K::DLabelTy: {
      size_t j = 0;
      for (char c : t->tel) {
        if (c == 'p') {
          infer(ctx, t->a[j]);
          j += 1;
        } else if (c == 'i') {
          checkType(ctx, t->a[j + 1]);
          check(ctx, t->a[j], ctx.eval(t->a[j + 1]));
          j += 2;
        } else {
          checkType(ctx, t->a[j + 2]);
          V I = ctx.eval(t->a[j + 2]);
          check(ctx, t->a[j], I);
          check(ctx, t->a[j + 1], I);
          j += 3;
        }
      }
      if (j != t->a.size()) fail(KErr::TypeMismatch, t, "malformed description label");
      return vset(1);
    }
    case K::DCall: {
      V L = labelResult(ctx, t->a[0], K::DLabelTy);
      chk(1, L);
      return vmk(K::IDesc, {labelIndexTypeV(L)});
    }
    case K::DecEnum: {
      chk(0, vmk(K::EnumU));
      V ET = vmk(K::EnumT, {ev(0)});
      chk(1, ET);
      chk(2, ET);
      chk(3, vpi("x", ET, [ET](V) { return motiveOver(ET); }));
      V P = ev(3);
      chk(4, vpi("x", ET, [P](V x) { return vapp(vapp(P, x), x); }));
      chk(5, vpi("x", ET, [ET, P](V x) { return vpi("y", ET, [P, x](V y) { return vapp(vapp(P, x), y); }); }));
      return vapp(vapp(P, ev(1)), ev(2));
    }
    case K::Ann: {
      checkType(ctx, t->a[1]);
      V T = ev(1);
      chk(0, T);
      return T;
    }
    default:
      fail(KErr::TypeMismatch, t, std::string("cannot infer a type for ") + kindName(t->k));
  }
}

void check(const Ctx& ctx, const TermP& t, const V& T) {
  auto ev = [&](int i) { return ctx.eval(t->a[i]); };
  switch (t->k) {
    case K::Lam: {
      if (T->k != K::Pi) fail(KErr::TypeMismatch, t, "lambda checked against a non-function type");
      if (t->a.size() > 1) {
        checkType(ctx, t->a[1]);
        if (!defEqV(ctx.depth(), ev(1), T->a[0])) fail(KErr::TypeMismatch, t, "lambda annotation mismatch");
      }
      V x = ctx.fresh();
      check(ctx.extend(t->s, T->a[0]), t->a[0], applyClo(T->clo, x));
      return;
    }
    case K::Pair: {
      if (T->k != K::Sigma) break;
      check(ctx, t->a[0], T->a[0]);
      check(ctx, t->a[1], applyClo(T->clo, ev(0)));
      return;
    }
    case K::ZeroE:
    case K::SucE: {
      if (T->k != K::EnumT) fail(KErr::TypeMismatch, t, "index checked against a non-enumeration type");
      V E = T->a[0];
      if (E->k != K::ConsE) fail(KErr::TypeMismatch, t, "index out of range of the enumeration");
      if (t->k == K::SucE) check(ctx, t->a[0], vmk(K::EnumT, {E->a[1]}));
      return;
    }
    case K::Refl: {
      if (T->k != K::Eq) fail(KErr::TypeMismatch, t, "refl checked against a non-equality type");
      if (!defEqV(ctx.depth(), T->a[1], T->a[2])) fail(KErr::TypeMismatch, t, "refl: sides are not equal");
      return;
    }
    case K::DVar:
      if (T->k != K::Desc) fail(KErr::TypeMismatch, t, "'var is a Desc code");
      return;
    case K::DOne:
      if (!isCodeType(T)) fail(KErr::TypeMismatch, t, "'1 checked against a non-description type");
      return;
    case K::DVarI:
      if (T->k != K::IDesc) fail(KErr::TypeMismatch, t, "'varI is an IDesc code");
      check(ctx, t->a[0], T->a[0]);
      return;
    case K::DTimes:
      if (!isCodeType(T)) fail(KErr::TypeMismatch, t, "'* checked against a non-description type");
      check(ctx, t->a[0], T);
      check(ctx, t->a[1], T);
      return;
    case K::DPi:
    case K::DSigma: {
      if (!isCodeType(T)) fail(KErr::TypeMismatch, t, "code checked against a non-description type");
      int l = checkType(ctx, t->a[0]);
      if (l > 0) fail(KErr::UniverseMismatch, t->a[0], "description domains must be small");
      check(ctx, t->a[1], arrowV(ev(0), T));
      return;
    }
    case K::DSigmaE: {
      if (!isCodeType(T)) fail(KErr::TypeMismatch, t, "code checked against a non-description type");
      check(ctx, t->a[0], vmk(K::EnumU));
      check(ctx, t->a[1], arrowV(vmk(K::EnumT, {ev(0)}), T));
      return;
    }
    case K::In: {
      if (T->k == K::Mu) {
        check(ctx, t->a[0], vInterp(T->a[0], T));
        return;
      }
      if (T->k == K::IMu) {
        V I = T->a[0], R = T->a[1];
        check(ctx, t->a[0], vIInterp(I, vapp(R, T->a[2]), vIMuFam(I, R)));
        return;
      }
      fail(KErr::TypeMismatch, t, "In checked against a non-fixpoint type");
    }
    case K::LRet:
      if (T->k != K::LabelTy) fail(KErr::TypeMismatch, t, "return checked against a non-label type");
      check(ctx, t->a[0], T->a[0]);
      return;
    case K::DRet: {
      if (T->k != K::DLabelTy) fail(KErr::TypeMismatch, t, "return checked against a non-label type");
      check(ctx, t->a[0], vmk(K::EnumU));
      V I = labelIndexTypeV(T);
      check(ctx, t->a[1], arrowV(vmk(K::EnumT, {ev(0)}), vmk(K::IDesc, {I})));
      return;
    }
    default:
      break;
  }
  V got = infer(ctx, t);
  expectSub(ctx, t, got, T);
}

void addGlobal(Globals& g, const std::string& name, const TermP& type, const TermP& term, bool recheck) {
  Ctx ctx(&g);
  if (g.find(name) && g.find(name)->value) fail(KErr::TypeMismatch, cnst(name), "duplicate global " + name);
  if (recheck) checkType(ctx, type);
  V vt = ctx.eval(type);
  if (term && recheck) check(ctx, term, vt);
  Global e{name, type, term, vt, term ? ctx.eval(term) : nullptr};
  if (!g.find(name)) g.order.push_back(name);
  g.m[name] = std::move(e);
}

}  // namespace idt

#include <stdexcept>

#include "idt/kernel.hpp"

namespace idt {

const V& Env::at(int index) const {
  auto* n = head.get();
  for (int i = 0; i < index && n; ++i) n = n->next.get();
  if (!n) throw std::logic_error("environment lookup out of range");
  return n->v;
}

V vmk(K k, std::vector<V> a, std::string s, int n) {
  auto v = std::make_shared<Value>();
  v->k = k;
  v->a = std::move(a);
  v->s = std::move(s);
  v->n = n;
  return v;
}

V vvar(int level) { return vmk(K::Neutral, {}, {}, level); }
V vset(int l) { return vmk(K::Set, {}, {}, l); }
V vunit() { return vmk(K::Unit); }
V vtt() { return vmk(K::Void); }

static CloP nativeClo(const std::string& x, std::function<V(V)> f) {
  auto c = std::make_shared<Closure>();
  c->native = std::move(f);
  c->name = x;
  return c;
}

static V binder(K k, const std::string& x, std::vector<V> a, CloP c) {
  auto v = std::make_shared<Value>();
  v->k = k;
  v->s = x;
  v->a = std::move(a);
  v->clo = std::move(c);
  return v;
}

V vpi(const std::string& x, V dom, std::function<V(V)> cod) {
  return binder(K::Pi, x, {std::move(dom)}, nativeClo(x, std::move(cod)));
}
V vsigma(const std::string& x, V dom, std::function<V(V)> cod) {
  return binder(K::Sigma, x, {std::move(dom)}, nativeClo(x, std::move(cod)));
}
V vlam(const std::string& x, std::function<V(V)> body) { return binder(K::Lam, x, {}, nativeClo(x, std::move(body))); }

static V stuck(const V& n, K k, std::vector<V> args) {
  auto r = std::make_shared<Value>(*n);
  r->sp.push_back(Elim{k, std::move(args)});
  return r;
}

V applyClo(const CloP& c, const V& x) {
  if (c->native) return c->native(x);
  return eval(c->env.push(x), c->body);
}

V vapp(const V& f, const V& x) {
  if (f->k == K::Lam) return applyClo(f->clo, x);
  if (f->k == K::Neutral) return stuck(f, K::App, {x});
  throw std::logic_error(std::string("apply: not a function: ") + kindName(f->k));
}

V vfst(const V& p) {
  if (p->k == K::Pair) return p->a[0];
  if (p->k == K::Neutral) return stuck(p, K::Fst, {});
  throw std::logic_error("fst: not a pair");
}

V vsnd(const V& p) {
  if (p->k == K::Pair) return p->a[1];
  if (p->k == K::Neutral) return stuck(p, K::Snd, {});
  throw std::logic_error("snd: not a pair");
}

static V vsplit(const V& C, const V& f, const V& p) {
  if (p->k == K::Pair) return vapp(vapp(f, p->a[0]), p->a[1]);
  if (p->k == K::Neutral) return stuck(p, K::Split, {C, f});
  throw std::logic_error("split: not a pair");
}

static V vunitElim(const V& C, const V& c, const V& u) {
  if (u->k == K::Void) return c;
  if (u->k == K::Neutral) return stuck(u, K::UnitElim, {C, c});
  throw std::logic_error("unit-elim: not a unit");
}

V vPiEnum(const V& E, const V& P) {
  if (E->k == K::NilE) return vunit();
  if (E->k == K::ConsE) {
    V rest = E->a[1];
    V head = vapp(P, vmk(K::ZeroE));
    V tail = vPiEnum(rest, vlam("n", [P](V n) { return vapp(P, vmk(K::SucE, {n})); }));
    return vsigma("_", head, [tail](V) { return tail; });
  }
  if (E->k == K::Neutral) return stuck(E, K::PiE, {P});
  throw std::logic_error("pi: not an enumeration");
}

static V vswitch(const V& E, const V& P, const V& t, const V& i) {
  if (i->k == K::ZeroE) return vfst(t);
  if (i->k == K::SucE) {
    V E2 = E->k == K::ConsE ? E->a[1] : E;
    V P2 = vlam("n", [P](V n) { return vapp(P, vmk(K::SucE, {n})); });
    return vswitch(E2, P2, vsnd(t), i->a[0]);
  }
  if (i->k == K::Neutral) return stuck(i, K::Switch, {E, P, t});
  throw std::logic_error("switch: not an index");
}

static V vJ(const V& A, const V& x, const V& P, const V& d, const V& y, const V& q) {
  if (q->k == K::Refl) return d;
  if (q->k == K::Neutral) return stuck(q, K::J, {A, x, P, d, y});
  throw std::logic_error("J: not an equality proof");
}

V vInterp(const V& D, const V& X) {
  switch (D->k) {
    case K::DVar:
      return X;
    case K::DOne:
      return vunit();
    case K::DTimes: {
      V l = vInterp(D->a[0], X), r = vInterp(D->a[1], X);
      return vsigma("_", l, [r](V) { return r; });
    }
    case K::DPi: {
      V T = D->a[1];
      return vpi("s", D->a[0], [T, X](V s) { return vInterp(vapp(T, s), X); });
    }
    case K::DSigma: {
      V T = D->a[1];
      return vsigma("s", D->a[0], [T, X](V s) { return vInterp(vapp(T, s), X); });
    }
    case K::DSigmaE: {
      V T = D->a[1];
      return vsigma("e", vmk(K::EnumT, {D->a[0]}), [T, X](V e) { return vInterp(vapp(T, e), X); });
    }
    case K::Neutral:
      return stuck(D, K::Interp, {X});
    default:
      throw std::logic_error("interp: not a description");
  }
}

V vIInterp(const V& I, const V& D, const V& X) {
  switch (D->k) {
    case K::DVarI:
      return vapp(X, D->a[0]);
    case K::DOne:
      return vunit();
    case K::DTimes: {
      V l = vIInterp(I, D->a[0], X), r = vIInterp(I, D->a[1], X);
      return vsigma("_", l, [r](V) { return r; });
    }
    case K::DPi: {
      V T = D->a[1];
      return vpi("s", D->a[0], [I, T, X](V s) { return vIInterp(I, vapp(T, s), X); });
    }
    case K::DSigma: {
      V T = D->a[1];
      return vsigma("s", D->a[0], [I, T, X](V s) { return vIInterp(I, vapp(T, s), X); });
    }
    case K::DSigmaE: {
      V T = D->a[1];
      return vsigma("e", vmk(K::EnumT, {D->a[0]}), [I, T, X](V e) { return vIInterp(I, vapp(T, e), X); });
    }
    case K::Neutral:
      return stuck(D, K::IInterp, {I, X});
    default:
      throw std::logic_error("interp: not an indexed description");
  }
}

V vAll(const V& D, const V& X, const V& P, const V& d) {
  switch (D->k) {
    case K::DVar:
      return vapp(P, d);
    case K::DOne:
      return vunit();
    case K::DTimes: {
      V l = vAll(D->a[0], X, P, vfst(d)), r = vAll(D->a[1], X, P, vsnd(d));
      return vsigma("_", l, [r](V) { return r; });
    }
    case K::DPi: {
      V T = D->a[1];
      return vpi("s", D->a[0], [T, X, P, d](V s) { return vAll(vapp(T, s), X, P, vapp(d, s)); });
    }
    case K::DSigma:
    case K::DSigmaE:
      return vAll(vapp(D->a[1], vfst(d)), X, P, vsnd(d));
    case K::Neutral:
      return stuck(D, K::All, {X, P, d});
    default:
      throw std::logic_error("All: not a description");
  }
}

V vIAll(const V& I, const V& D, const V& X, const V& P, const V& d) {
  switch (D->k) {
    case K::DVarI:
      return vapp(vapp(P, D->a[0]), d);
    case K::DOne:
      return vunit();
    case K::DTimes: {
      V l = vIAll(I, D->a[0], X, P, vfst(d)), r = vIAll(I, D->a[1], X, P, vsnd(d));
      return vsigma("_", l, [r](V) { return r; });
    }
    case K::DPi: {
      V T = D->a[1];
      return vpi("s", D->a[0], [I, T, X, P, d](V s) { return vIAll(I, vapp(T, s), X, P, vapp(d, s)); });
    }
    case K::DSigma:
    case K::DSigmaE:
      return vIAll(I, vapp(D->a[1], vfst(d)), X, P, vsnd(d));
    case K::Neutral:
      return stuck(D, K::IAll, {I, X, P, d});
    default:
      throw std::logic_error("IAll: not an indexed description");
  }
}

V vIMuFam(const V& I, const V& R) {
  return vlam("j", [I, R](V j) { return vmk(K::IMu, {I, R, j}); });
}

static V vInduction(const V& D, const V& P, const V& m, const V& x);
static V vIInduction(const V& I, const V& R, const V& P, const V& m, const V& i, const V& x);

static V vIndMap(const V& D, const V& P, const V& m, const V& sub, const V& d) {
  switch (sub->k) {
    case K::DVar:
      return vInduction(D, P, m, d);
    case K::DOne:
      return vtt();
    case K::DTimes:
      return vmk(K::Pair, {vIndMap(D, P, m, sub->a[0], vfst(d)), vIndMap(D, P, m, sub->a[1], vsnd(d))});
    case K::DPi: {
      V T = sub->a[1];
      return vlam("s", [D, P, m, T, d](V s) { return vIndMap(D, P, m, vapp(T, s), vapp(d, s)); });
    }
    case K::DSigma:
    case K::DSigmaE:
      return vIndMap(D, P, m, vapp(sub->a[1], vfst(d)), vsnd(d));
    case K::Neutral:
      return stuck(sub, K::IndMap, {D, P, m, d});
    default:
      throw std::logic_error("induction: not a description");
  }
}

static V vInduction(const V& D, const V& P, const V& m, const V& x) {
  if (x->k == K::In) {
    V d = x->a[0];
    return vapp(vapp(m, d), vIndMap(D, P, m, D, d));
  }
  if (x->k == K::Neutral) return stuck(x, K::Induction, {D, P, m});
  throw std::logic_error("induction: scrutinee is not In");
}

static V vIIndMap(const V& I, const V& R, const V& P, const V& m, const V& sub, const V& d) {
  switch (sub->k) {
    case K::DVarI:
      return vIInduction(I, R, P, m, sub->a[0], d);
    case K::DOne:
      return vtt();
    case K::DTimes:
      return vmk(K::Pair,
                 {vIIndMap(I, R, P, m, sub->a[0], vfst(d)), vIIndMap(I, R, P, m, sub->a[1], vsnd(d))});
    case K::DPi: {
      V T = sub->a[1];
      return vlam("s", [I, R, P, m, T, d](V s) { return vIIndMap(I, R, P, m, vapp(T, s), vapp(d, s)); });
    }
    case K::DSigma:
    case K::DSigmaE:
      return vIIndMap(I, R, P, m, vapp(sub->a[1], vfst(d)), vsnd(d));
    case K::Neutral:
      return stuck(sub, K::IIndMap, {I, R, P, m, d});
    default:
      throw std::logic_error("iinduction: not an indexed description");
  }
}

static V vIInduction(const V& I, const V& R, const V& P, const V& m, const V& i, const V& x) {
  if (x->k == K::In) {
    V d = x->a[0];
    return vapp(vapp(vapp(m, i), d), vIIndMap(I, R, P, m, vapp(R, i), d));
  }
  if (x->k == K::Neutral) return stuck(x, K::IInduction, {I, R, P, m, i});
  throw std::logic_error("iinduction: scrutinee is not In");
}

static int numeralOf(const V& v) {
  int n = 0;
  const Value* p = v.get();
  while (p->k == K::SucE) {
    ++n;
    p = p->a[0].get();
  }
  return p->k == K::ZeroE ? n : -1;
}

static V vDecEnum(const V& E, const V& x, const V& y, const V& P, const V& eqm, const V& neq) {
  int nx = numeralOf(x), ny = numeralOf(y);
  if (nx >= 0 && ny >= 0) return nx == ny ? vapp(eqm, x) : vapp(vapp(neq, x), y);
  if (nx < 0) {
    if (x->k != K::Neutral) throw std::logic_error("decide: not an index");
    return stuck(x, K::DecEnum, {E, y, P, eqm, neq});
  }
  if (y->k != K::Neutral) throw std::logic_error("decide: not an index");
  return stuck(y, K::DecEnumR, {E, x, P, eqm, neq});
}

static V vLCall(const V& L, const V& c) {
  if (c->k == K::LRet) return c->a[0];
  if (c->k == K::Neutral) return stuck(c, K::LCall, {L});
  throw std::logic_error("call: not a labelled value");
}

static V vDCall(const V& L, const V& d) {
  if (d->k == K::DRet) return vmk(K::DSigmaE, {d->a[0], d->a[1]});
  if (d->k == K::Neutral) return stuck(d, K::DCall, {L});
  throw std::logic_error("call: not a description return");
}

V labelIndexTypeV(const V& l) {
  V acc = vunit();
  size_t j = 0;
  for (char c : l->tel) {
    if (c == 'p') {
      j += 1;
    } else if (c == 'i') {
      V I = l->a[j + 1];
      V prev = acc;
      acc = vsigma("_", prev, [I](V) { return I; });
      j += 2;
    } else {
      V I = l->a[j + 2];
      V prev = acc;
      acc = vsigma("_", prev, [I](V) { return I; });
      j += 3;
    }
  }
  return acc;
}

V eval(const Env& env, const TermP& t) {
  auto ev = [&](int i) { return eval(env, t->a[i]); };
  switch (t->k) {
    case K::Var:
      return env.at(t->n);
    case K::Lvl:
      throw std::logic_error("eval: unclosed builder level");
    case K::Const: {
      const Global* g = env.g ? env.g->find(t->s) : nullptr;
      if (!g) throw std::logic_error("eval: unknown global " + t->s);
      if (g->value) return g->value;
      return vmk(K::Neutral, {}, t->s);
    }
    case K::Pi:
    case K::Sigma: {
      auto c = std::make_shared<Closure>(Closure{env, t->a[1], nullptr, t->s});
      return binder(t->k, t->s, {ev(0)}, c);
    }
    case K::Lam: {
      auto c = std::make_shared<Closure>(Closure{env, t->a[0], nullptr, t->s});
      return binder(K::Lam, t->s, {}, c);
    }
    case K::App:
      return vapp(ev(0), ev(1));
    case K::Fst:
      return vfst(ev(0));
    case K::Snd:
      return vsnd(ev(0));
    case K::Split:
      return vsplit(ev(0), ev(1), ev(2));
    case K::UnitElim:
      return vunitElim(ev(0), ev(1), ev(2));
    case K::PiE:
      return vPiEnum(ev(0), ev(1));
    case K::Switch:
      return vswitch(ev(0), ev(1), ev(2), ev(3));
    case K::J:
      return vJ(ev(0), ev(1), ev(2), ev(3), ev(4), ev(5));
    case K::Interp:
      return vInterp(ev(0), ev(1));
    case K::IInterp:
      return vIInterp(ev(0), ev(1), ev(2));
    case K::All:
      return vAll(ev(0), ev(1), ev(2), ev(3));
    case K::IAll:
      return vIAll(ev(0), ev(1), ev(2), ev(3), ev(4));
    case K::Induction:
      return vInduction(ev(0), ev(1), ev(2), ev(3));
    case K::IInduction:
      return vIInduction(ev(0), ev(1), ev(2), ev(3), ev(4), ev(5));
    case K::IndMap:
      return vIndMap(ev(0), ev(1), ev(2), ev(3), ev(4));
    case K::IIndMap:
      return vIIndMap(ev(0), ev(1), ev(2), ev(3), ev(4), ev(5));
    case K::LCall:
      return vLCall(ev(0), ev(1));
    case K::DCall:
      return vDCall(ev(0), ev(1));
    case K::DecEnum:
      return vDecEnum(ev(0), ev(1), ev(2), ev(3), ev(4), ev(5));
    case K::Ann:
      return ev(0);
    default: {
      // canonical forms: evaluate children in place
      std::vector<V> as;
      as.reserve(t->a.size());
      for (size_t i = 0; i < t->a.size(); ++i) as.push_back(ev(static_cast<int>(i)));
      auto v = vmk(t->k, std::move(as), t->s, t->n);
      if (!t->tel.empty()) std::const_pointer_cast<Value>(v)->tel = t->tel;
      return v;
    }
  }
}

// Readback ---------------------------------------------------------------------

static TermP rbElim(int depth, TermP h, const Elim& e) {
  auto rb = [&](size_t i) { return readback(depth, e.a[i]); };
  switch (e.k) {
    case K::App:
      return app(h, rb(0));
    case K::Fst:
      return fst(h);
    case K::Snd:
      return snd(h);
    case K::Split:
      return mk(K::Split, {rb(0), rb(1), h});
    case K::UnitElim:
      return mk(K::UnitElim, {rb(0), rb(1), h});
    case K::PiE:
      return mk(K::PiE, {h, rb(0)});
    case K::Switch:
      return mk(K::Switch, {rb(0), rb(1), rb(2), h});
    case K::J:
      return mk(K::J, {rb(0), rb(1), rb(2), rb(3), rb(4), h});
    case K::Interp:
      return mk(K::Interp, {h, rb(0)});
    case K::IInterp:
      return mk(K::IInterp, {rb(0), h, rb(1)});
    case K::All:
      return mk(K::All, {h, rb(0), rb(1), rb(2)});
    case K::IAll:
      return mk(K::IAll, {rb(0), h, rb(1), rb(2), rb(3)});
    case K::Induction:
      return mk(K::Induction, {rb(0), rb(1), rb(2), h});
    case K::IInduction:
      return mk(K::IInduction, {rb(0), rb(1), rb(2), rb(3), rb(4), h});
    case K::IndMap:
      return mk(K::IndMap, {rb(0), rb(1), rb(2), h, rb(3)});
    case K::IIndMap:
      return mk(K::IIndMap, {rb(0), rb(1), rb(2), rb(3), h, rb(4)});
    case K::LCall:
      return mk(K::LCall, {rb(0), h});
    case K::DCall:
      return mk(K::DCall, {rb(0), h});
    case K::DecEnum:
      return mk(K::DecEnum, {rb(0), h, rb(1), rb(2), rb(3), rb(4)});
    case K::DecEnumR:
      return mk(K::DecEnum, {rb(0), rb(1), h, rb(2), rb(3), rb(4)});
    default:
      throw std::logic_error("readback: unknown eliminator");
  }
}

TermP readback(int depth, const V& v) {
  switch (v->k) {
    case K::Neutral: {
      TermP h = v->s.empty() ? var(depth - 1 - v->n) : cnst(v->s);
      for (auto& e : v->sp) h = rbElim(depth, h, e);
      return h;
    }
    case K::Pi:
    case K::Sigma: {
      TermP dom = readback(depth, v->a[0]);
      TermP cod = readback(depth + 1, applyClo(v->clo, vvar(depth)));
      return mk(v->k, {dom, cod}, v->clo->name.empty() ? v->s : v->clo->name);
    }
    case K::Lam: {
      TermP body = readback(depth + 1, applyClo(v->clo, vvar(depth)));
      return mk(K::Lam, {body}, v->clo->name);
    }
    default: {
      std::vector<TermP> as;
      as.reserve(v->a.size());
      for (auto& c : v->a) as.push_back(readback(depth, c));
      auto t = std::make_shared<Term>();
      t->k = v->k;
      t->a = std::move(as);
      t->s = v->s;
      t->n = v->n;
      t->tel = v->tel;
      return t;
    }
  }
}

}  // namespace idt
